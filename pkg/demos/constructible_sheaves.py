"""Leading terms of L-functions of constructible sheaves against Weil-etale Euler characteristics."""

from ffweil.fields import AbelianCover, Place, get_field
from ffweil.galois import FrobModule, induced_lattice, split_lattice
from ffweil.lfunctions import Pushforward, Skyscraper, VirtualSheaf
from ffweil.weil_etale import chi_w_virtual, verify_theorem_constructible

f3 = get_field(3)
deg2 = Place.finite((1, 0, 1))  # t^2 + 1
sheaves = {
    "constant Z": Pushforward(AbelianCover(f3), split_lattice((1,))),
    "pushforward from F_9": Pushforward(AbelianCover(f3, 2), induced_lattice((2,))),
    "Z(swap) at t^2+1": Skyscraper(deg2, FrobModule.free([[0, 1], [1, 0]]), f3),
    "Z/5 at t": Skyscraper(Place.finite((0, 1)), FrobModule((5,), [[2]]), f3),
}
for name, z in sheaves.items():
    rep = verify_theorem_constructible(z)
    chi = chi_w_virtual(z)
    print(f"{name:24s} r = {chi.r}  chi_W = {chi.chi_w}  lead = {rep.values['lead'].value}  -> {rep.passed}")

mixed = VirtualSheaf(f3, ((1, sheaves["constant Z"]), (-1, sheaves["Z(swap) at t^2+1"])))
print("virtual combination:", verify_theorem_constructible(mixed).passed)
