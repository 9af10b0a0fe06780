"""Small built-in example graphs and hierarchies.

Used by the CLI demo, the test suite, and the service quickstart; kept in
the package so `pcg` works out of the box without external data.
"""

TABLE_PCG = """\
# four-legged table with a rounded top
input table_width: float = 2.0 range 0.5..4.0
input table_length: float = 2.0 range 0.5..4.0
input leg_height: float = 2.0 range 0.2..4.0
input leg_radius: float = 1.0 range 0.02..1.5
leg_span_x = subtract(a=table_width, b=0.5)
leg_span_y = subtract(a=table_length, b=0.5)
leg_corners = rectangle(width=leg_span_x, height=leg_span_y)
leg = cylinder(radius=leg_radius, depth=leg_height)
legs = instance_on_points(points=leg_corners, instance=leg)
leg_drop = divide(a=leg_height, b=-2.0)
leg_offset = combine_xyz(z=leg_drop)
legs_placed = transform(geometry=legs, translation=leg_offset)
top_profile = rectangle(width=table_width, height=table_length)
top_rounded = fillet(curve=top_profile, radius=0.25, count=20)
top_face = fill(curve=top_rounded)
top = extrude(mesh=top_face, offset_scale=1.0)
table = join(legs_placed, top)
output = table
"""

MINIMAL_CUBE_PCG = """\
input h: float = 1.0
c = cube()
out = scale(geometry=c, s=(1, 1, h))
output = out
"""


def chair_hierarchy() -> dict:
    """A segmented chair: base (4 legs), seat, back, and two armrests.

    Leaf boxes use the 12-float layout [center, size, dir1, dir2]; all boxes
    here are axis-aligned.
    """

    def box(cx, cy, cz, sx, sy, sz):
        return [cx, cy, cz, sx, sy, sz, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]

    legs = [
        {"label": "leg", "box": box(x, y, 0.25, 0.06, 0.06, 0.5)}
        for x in (-0.22, 0.22) for y in (-0.22, 0.22)
    ]
    arms = [
        {"label": "arm", "box": box(x, 0.0, 0.78, 0.05, 0.5, 0.05)}
        for x in (-0.28, 0.28)
    ]
    return {
        "label": "chair",
        "children": [
            {"label": "base", "children": legs},
            {"label": "seat", "children": [
                {"label": "seat_pad", "box": box(0.0, 0.0, 0.53, 0.56, 0.56, 0.06)},
            ]},
            {"label": "back", "children": [
                {"label": "back_panel", "box": box(0.0, -0.26, 0.85, 0.56, 0.06, 0.6)},
            ]},
            {"label": "armrest", "children": arms},
        ],
    }
