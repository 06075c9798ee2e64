"""How fast do inscribed polytopes of the ball converge in volume?

The symmetric difference should decay like n^(-2/(d-1)): n^-2 for polygons,
n^-1 for polyhedra on the sphere.
"""
from floatillum.verify import scaling_study

for d in (2, 3):
    res = scaling_study(d)
    print(f"d = {d}: fitted slope {res.slope:.4f} (theory {-2 / (d - 1):.0f})")
    print(res.to_csv())
