"""Norm-one tori: L-values, class data and both routes to the Tamagawa number."""

from ffweil.fields import AbelianCover, get_field
from ffweil.tori import (
    class_data,
    norm_one_torus,
    rho_t,
    sha_of_torus,
    tamagawa_modern,
    tamagawa_ono,
    verify_torus_theorem,
)

for q in (2, 3, 5):
    for n in (2, 3, 4):
        t = norm_one_torus(AbelianCover(get_field(q), n))
        verify_torus_theorem(t)
        print(f"q={q} n={n}: rho = {rho_t(t)}, units = {class_data(t).units}, "
              f"tau (H^1/Sha) = {tamagawa_ono(t)}, tau (L-value) = {tamagawa_modern(t)}")

biquad = norm_one_torus(AbelianCover.build(get_field(5), 1, [(2, "t"), (2, "t-1")]))
print("\nbiquadratic norm-one torus over F_5(t):")
print("  Sha stand-in:", sha_of_torus(biquad).torsion, " tau from H^1/Sha:", tamagawa_ono(biquad))
