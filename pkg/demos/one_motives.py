"""1-motives [Z^k -> G_m^d]: degeneracy data, L-functions and the leading-term identity."""

from ffweil.fields import get_field
from ffweil.motives import OneMotive, chi_w_motive, l_motive, r_m, verify_theorem_main, x_delta

f3 = get_field(3)
for rows in ([["t"]], [["2"]], [["t"], ["t-1"]], [["t", "t+1"], ["t^2", "2"]]):
    m = OneMotive.parse(f3, rows)
    support = [p.place.label(f3) for p in x_delta(m).places]
    rep = verify_theorem_main(m)
    print(f"{rows}: places {support}, r_M = {r_m(m)}, chi_W = {chi_w_motive(m)}")
    print(f"    L = {l_motive(m)}")
    print(f"    lead at t = 1/q: {rep.checks[-1].lhs} vs {rep.checks[-1].rhs}, passed = {rep.passed}")
