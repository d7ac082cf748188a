"""Places of F_q(t), zeta functions of covers, and a point-count cross-check."""

from ffweil.fields import AbelianCover, enumerate_places, genus_of_cover, get_field, necklace_count
from ffweil.lfunctions import zeta_of_cover

f2 = get_field(2)
counts = [0] * 8
for place in enumerate_places(f2, 8):
    if not place.is_infinite:
        counts[place.degree - 1] += 1
print("finite places of F_2(t) by degree:", counts)
print("necklace formula:                 ", [necklace_count(2, n) for n in range(1, 9)])

cover = AbelianCover.build(get_field(3), 1, [(2, "t^3-t")])
z = zeta_of_cover(cover)
print(f"\ny^2 = t^3 - t over F_3: genus {genus_of_cover(cover)}, zeta = {z}")
# N_1 = q + 1 - a_1 where the numerator is 1 - a_1 t + q t^2
a1 = -z.num.coeffs[1] if len(z.num.coeffs) > 1 else 0
print("points over F_3 from the zeta numerator:", 3 + 1 - a1)
print("value of the numerator at t = 1 (order of Pic^0):", z.num(1))
