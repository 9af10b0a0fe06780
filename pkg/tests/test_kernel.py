"""Geometry kernel tests: primitives, curve/mesh ops, evaluation, caching."""

import math
import random

import numpy as np
import pytest

from helpers import random_delta, random_graph
from pcg.kernel import (
    Curve,
    EMPTY_MESH,
    EvalError,
    EvalSession,
    GeometryError,
    Mesh,
    bounds,
    concat_meshes,
    decode_frame,
    encode_frame,
    evaluate,
    export_obj,
    extrude_mesh,
    fill_curve,
    fillet_curve,
    import_obj,
    instance_on_points,
    make_cube,
    make_cylinder,
    make_rectangle,
    make_sphere,
    meshes_equal,
    signed_volume,
    surface_area,
)
from pcg.kernel.transforms import apply_trs, euler_to_matrix, matrix_to_euler
from pcg.lang.parser import parse_pcg


def shoelace_area(pts2):
    x, y = pts2[:, 0], pts2[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


class TestCube:
    def test_unit_cube(self):
        m = make_cube((1, 1, 1))
        assert m.num_vertices == 8 and m.num_triangles == 12
        lo, hi = bounds(m)
        assert np.allclose(lo, [-0.5, -0.5, -0.5]) and np.allclose(hi, [0.5, 0.5, 0.5])

    def test_stretched(self):
        lo, hi = bounds(make_cube((2, 1, 1)))
        assert lo[0] == -1.0 and hi[0] == 1.0

    def test_vertex_set_closed_under_reflections(self):
        m = make_cube((1.5, 0.5, 2.0))
        verts = {tuple(v) for v in np.round(m.vertices, 12)}
        for axis in range(3):
            flipped = m.vertices.copy()
            flipped[:, axis] *= -1
            assert {tuple(v) for v in np.round(flipped, 12)} == verts

    def test_volume_and_watertight(self):
        m = make_cube((1.5, 0.5, 2.0))
        assert signed_volume(m) == pytest.approx(1.5 * 0.5 * 2.0, abs=1e-12)

    def test_nonpositive_size_rejected(self):
        with pytest.raises(GeometryError) as e:
            make_cube((1, 0, 1))
        assert e.value.code == "NumericError"


class TestCylinder:
    def test_ring_vertices_on_radius(self):
        m = make_cylinder(1.0, 2.0, 32)
        ring = m.vertices[np.abs(np.abs(m.vertices[:, 2]) - 1.0) < 1e-12]
        ring = ring[np.linalg.norm(ring[:, :2], axis=1) > 1e-9]  # drop centers
        assert np.allclose(np.linalg.norm(ring[:, :2], axis=1), 1.0)
        assert m.vertices[:, 2].min() == -1.0 and m.vertices[:, 2].max() == 1.0

    def test_ring_angles(self):
        n = 8
        m = make_cylinder(1.0, 2.0, n)
        for k in range(n):
            expect = [np.cos(2 * np.pi * k / n), np.sin(2 * np.pi * k / n), -1.0]
            assert np.allclose(m.vertices[k], expect)

    def test_smallest_case_fan_caps(self):
        # caps are center-vertex fans: segments triangles per cap
        m = make_cylinder(1.0, 1.0, 3)
        assert m.num_vertices == 2 * 3 + 2
        assert m.num_triangles == 4 * 3  # 6 side + 3 + 3 caps

    def test_volume_within_two_percent(self):
        m = make_cylinder(1.0, 2.0, 64)
        assert signed_volume(m) == pytest.approx(math.pi * 2.0, rel=0.02)

    def test_invalid_dims(self):
        for bad in [(0, 1, 8), (1, -1, 8), (1, 1, 2)]:
            with pytest.raises(GeometryError):
                make_cylinder(*bad)


class TestSphere:
    def test_vertices_on_radius(self):
        m = make_sphere(1.0, 16, 32)
        assert np.abs(np.linalg.norm(m.vertices, axis=1) - 1.0).max() < 1e-9

    def test_bounding_box(self):
        lo, hi = bounds(make_sphere(0.5))
        assert np.allclose(lo, [-0.5, -0.5, -0.5], atol=1e-9)
        assert np.allclose(hi, [0.5, 0.5, 0.5], atol=1e-9)

    def test_surface_area_within_two_percent(self):
        m = make_sphere(1.0, 16, 32)
        assert surface_area(m) == pytest.approx(4 * math.pi, rel=0.02)
        assert signed_volume(m) > 0  # outward winding

    def test_scaled_radius_area(self):
        m = make_sphere(2.0, 16, 32)
        assert surface_area(m) == pytest.approx(16 * math.pi, rel=0.02)


class TestRectangle:
    def test_square_corners(self):
        c = make_rectangle(2, 2)
        assert c.closed and c.num_points == 4
        assert np.allclose(c.points[0], [1, 1, 0])
        assert {tuple(p) for p in c.points} == {(1, 1, 0), (-1, 1, 0),
                                                (-1, -1, 0), (1, -1, 0)}

    def test_width_along_x(self):
        c = make_rectangle(2, 1)
        lo, hi = c.points.min(axis=0), c.points.max(axis=0)
        assert hi[0] - lo[0] == 2.0 and hi[1] - lo[1] == 1.0

    def test_counterclockwise(self):
        c = make_rectangle(3, 2)
        assert shoelace_area(c.points[:, :2]) > 0


class TestFillet:
    def test_zero_radius_identity(self):
        c = make_rectangle(2, 2)
        assert fillet_curve(c, 0.0, 20) is c

    def test_arc_points_at_radius_from_centers(self):
        r = 0.25
        out = fillet_curve(make_rectangle(2, 2), r, 20)
        assert out.num_points == 4 * 20
        centers = np.array([[sx * (1 - r), sy * (1 - r), 0.0]
                            for sx in (1, -1) for sy in (1, -1)])
        for p in out.points:
            d = np.linalg.norm(centers - p, axis=1).min()
            assert d == pytest.approx(r, abs=1e-12)

    def test_perimeter_closed_form(self):
        r = 0.25
        out = fillet_curve(make_rectangle(2, 2), r, 64)
        segs = np.roll(out.points, -1, axis=0) - out.points
        perimeter = np.linalg.norm(segs, axis=1).sum()
        assert perimeter == pytest.approx(4 * (2 - 2 * r) + 2 * math.pi * r, abs=1e-3)

    def test_radius_clamped_to_half_segment(self):
        out = fillet_curve(make_rectangle(2, 2), 5.0, 8)
        # effective tangent length is 1.0 (half side); arcs meet at midpoints
        assert out.num_points == 4 * 8
        assert np.abs(out.points).max() <= 1.0 + 1e-9

    def test_open_curve_rejected(self):
        c = Curve(np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0]], float), closed=False)
        with pytest.raises(GeometryError):
            fillet_curve(c, 0.1, 4)


class TestFill:
    def test_unit_square_area(self):
        m = fill_curve(make_rectangle(1, 1))
        assert surface_area(m) == pytest.approx(1.0, abs=1e-12)
        assert m.num_triangles == 2

    def test_triangle_sum_equals_polygon_area(self):
        out = fillet_curve(make_rectangle(2, 2), 0.25, 16)
        m = fill_curve(out)
        assert surface_area(m) == pytest.approx(shoelace_area(out.points[:, :2]),
                                                abs=1e-9)

    def test_filleted_square_closed_form(self):
        r = 0.25
        out = fillet_curve(make_rectangle(2, 2), r, 512)
        m = fill_curve(out)
        assert surface_area(m) == pytest.approx(4 - (4 - math.pi) * r * r, abs=1e-6)

    def test_l_shape_matches_shoelace(self):
        pts = np.array([[0, 0, 0], [2, 0, 0], [2, 1, 0], [1, 1, 0],
                        [1, 2, 0], [0, 2, 0]], float)
        c = Curve(pts, closed=True)
        m = fill_curve(c)
        assert surface_area(m) == pytest.approx(shoelace_area(pts[:, :2]), abs=1e-12)
        assert m.num_triangles == len(pts) - 2

    def test_ccw_input_fills_with_plus_z_normals(self):
        m = fill_curve(make_rectangle(2, 1))
        v, t = m.vertices, m.triangles
        normals = np.cross(v[t[:, 1]] - v[t[:, 0]], v[t[:, 2]] - v[t[:, 0]])
        assert (normals[:, 2] > 0).all()

    def test_self_intersecting_reported(self):
        c = Curve(np.array([[0, 0, 0], [2, 1, 0], [2, 0, 0], [0, 1.2, 0]]),
                  closed=True)
        with pytest.raises(GeometryError) as e:
            fill_curve(c)
        assert e.value.code == "SelfIntersecting"

    def test_non_planar_reported(self):
        c = Curve(np.array([[0, 0, 0], [1, 0, 0.4], [1, 1, 0], [0, 1, -0.3]]),
                  closed=True)
        with pytest.raises(GeometryError) as e:
            fill_curve(c)
        assert e.value.code == "NonPlanarCurve"


def edge_use_counts(mesh):
    counts = {}
    for tri in mesh.triangles:
        for k in range(3):
            a, b = int(tri[k]), int(tri[(k + 1) % 3])
            counts[(min(a, b), max(a, b))] = counts.get((min(a, b), max(a, b)), 0) + 1
    return counts


class TestExtrude:
    def test_unit_square_to_cube(self):
        m = extrude_mesh(fill_curve(make_rectangle(1, 1)), 1.0)
        assert m.num_vertices == 8
        assert signed_volume(m) == pytest.approx(1.0, abs=1e-9)
        assert set(edge_use_counts(m).values()) == {2}  # watertight

    def test_thickness_along_plus_z(self):
        cap = fill_curve(fillet_curve(make_rectangle(2, 2), 0.25, 20))
        m = extrude_mesh(cap, 1.0)
        assert m.vertices[:, 2].min() == 0.0
        assert m.vertices[:, 2].max() == 1.0

    def test_volume_equals_area_times_offset(self):
        cap = fill_curve(fillet_curve(make_rectangle(2, 1.5), 0.2, 32))
        area = surface_area(cap)
        for offset in (0.7, -0.4):
            m = extrude_mesh(cap, offset)
            assert signed_volume(m) == pytest.approx(area * abs(offset), abs=1e-6)
            assert set(edge_use_counts(m).values()) == {2}

    def test_closed_mesh_rejected(self):
        with pytest.raises(GeometryError) as e:
            extrude_mesh(make_cube(), 1.0)
        assert e.value.code == "OpenBoundaryAmbiguous"

    def test_two_loops_rejected(self):
        two_caps = concat_meshes([fill_curve(make_rectangle(1, 1)),
                                  fill_curve(make_rectangle(1, 1)).translated((3, 0, 0))])
        with pytest.raises(GeometryError) as e:
            extrude_mesh(two_caps, 1.0)
        assert e.value.code == "OpenBoundaryAmbiguous"


class TestTransformMath:
    def test_euler_round_trip(self):
        rng = random.Random(3)
        for _ in range(200):
            angles = (rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                      rng.uniform(-1.5, 1.5))
            rot = euler_to_matrix(*angles)
            back = euler_to_matrix(*matrix_to_euler(rot))
            assert np.allclose(rot, back, atol=1e-12)

    def test_composition_matches_matrix_oracle(self):
        rng = random.Random(5)
        pts = np.array([[rng.uniform(-1, 1) for _ in range(3)] for _ in range(20)])
        for _ in range(50):
            t1 = [rng.uniform(-1, 1) for _ in range(3)]
            r1 = [rng.uniform(-1, 1) for _ in range(3)]
            s1 = [rng.uniform(0.3, 2) for _ in range(3)]
            t2 = [rng.uniform(-1, 1) for _ in range(3)]
            r2 = [rng.uniform(-1, 1) for _ in range(3)]
            s2 = [rng.uniform(0.3, 2) for _ in range(3)]
            step = apply_trs(apply_trs(pts, t1, r1, s1), t2, r2, s2)
            # oracle: explicit homogeneous matrix product
            m1 = np.eye(4)
            m1[:3, :3] = euler_to_matrix(*r1) @ np.diag(s1)
            m1[:3, 3] = t1
            m2 = np.eye(4)
            m2[:3, :3] = euler_to_matrix(*r2) @ np.diag(s2)
            m2[:3, 3] = t2
            hom = np.hstack([pts, np.ones((len(pts), 1))])
            oracle = (hom @ (m2 @ m1).T)[:, :3]
            assert np.allclose(step, oracle, atol=1e-12)


class TestInstanceAndJoin:
    def test_four_corner_instancing(self):
        corners = make_rectangle(2, 2)
        cyl = make_cylinder(0.2, 1.0, 8)
        m = instance_on_points(corners, cyl)
        assert m.num_triangles == 4 * cyl.num_triangles
        assert m.num_vertices == 4 * cyl.num_vertices

    def test_single_point(self):
        pt = Curve(np.array([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]]), closed=False)
        single = Curve(np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]), closed=False)
        cube = make_cube()
        m = instance_on_points(single, cube)
        assert m.num_triangles == 2 * cube.num_triangles

    def test_copy_centroids_shift_by_point(self):
        points = make_rectangle(3, 1)
        cube = make_cube((0.2, 0.2, 0.2))
        m = instance_on_points(points, cube)
        base = cube.vertices.mean(axis=0)
        nv = cube.num_vertices
        for i, p in enumerate(points.points):
            copy_centroid = m.vertices[i * nv:(i + 1) * nv].mean(axis=0)
            assert np.allclose(copy_centroid, base + p, atol=1e-12)

    def test_join_with_empty_is_identity_up_to_renumbering(self):
        a = make_cube()
        joined = concat_meshes([a, EMPTY_MESH])
        assert meshes_equal(joined, Mesh(a.vertices, a.triangles,
                                         a.tags_or_untagged(), {}))

    def test_join_counts(self):
        parts = [make_cube(), make_cylinder(1, 1, 12), make_sphere(1, 4, 6)]
        joined = concat_meshes(parts)
        assert joined.num_vertices == sum(p.num_vertices for p in parts)
        assert joined.num_triangles == sum(p.num_triangles for p in parts)

    def test_join_associative_up_to_renumbering(self):
        a, b, c = make_cube(), make_cylinder(1, 1, 6), make_sphere(1, 3, 5)
        left = concat_meshes([concat_meshes([a, b]), c])
        right = concat_meshes([a, concat_meshes([b, c])])
        assert meshes_equal(left, right)


class TestObjAndFrames:
    def test_unit_cube_obj_layout(self):
        text = export_obj(make_cube())
        lines = text.splitlines()
        assert sum(1 for l in lines if l.startswith("v ")) == 8
        assert sum(1 for l in lines if l.startswith("f ")) == 12

    def test_round_trip_within_print_precision(self):
        m = make_cylinder(0.7, 1.3, 16)
        back = import_obj(export_obj(m))
        assert np.allclose(back.vertices, m.vertices, rtol=1e-8, atol=1e-12)
        assert np.array_equal(back.triangles, m.triangles)

    def test_empty_mesh_header_only(self):
        text = export_obj(EMPTY_MESH)
        assert text.startswith("#")
        assert "v " not in text and "f " not in text

    def test_frame_codec_lossless_at_f32(self):
        m = make_sphere(1.0, 6, 9)
        back = decode_frame(encode_frame(m))
        assert np.array_equal(back.vertices,
                              m.vertices.astype(np.float32).astype(np.float64))
        assert np.array_equal(back.triangles, m.triangles)

    def test_frame_size_check(self):
        with pytest.raises(ValueError):
            decode_frame(encode_frame(make_cube())[:-3])


class TestEvaluate:
    def test_plain_cube_program(self):
        g = parse_pcg("c = cube()\noutput = c\n").graph
        m = evaluate(g)
        assert m.num_vertices == 8 and m.num_triangles == 12
        lo, hi = bounds(m)
        assert np.allclose(lo, -0.5) and np.allclose(hi, 0.5)

    def test_table_legs_span_depth(self, table_graph):
        m = evaluate(table_graph, {"table_width": 2.0, "table_length": 2.0,
                                   "leg_height": 2.0, "leg_radius": 1.0})
        leg_tag = [k for k, v in m.tag_names.items() if v == "leg"][0]
        top_tag = [k for k, v in m.tag_names.items() if v == "top"][0]
        leg_tris = m.triangles[m.part_tags == leg_tag]
        leg_z = m.vertices[np.unique(leg_tris)][:, 2]
        assert leg_z.max() - leg_z.min() == pytest.approx(2.0)
        top_tris = m.triangles[m.part_tags == top_tag]
        assert len(top_tris) > 0 and len(leg_tris) > 0

    def test_deterministic(self, table_graph):
        assert meshes_equal(evaluate(table_graph), evaluate(table_graph))

    def test_switch_default_empty(self):
        g = parse_pcg("c = cube()\ns = switch(false, c)\noutput = s\n").graph
        assert evaluate(g).is_empty()

    def test_switch_laziness(self):
        src = ("input pick: bool = true\n"
               "a = cube()\n"
               "b = divide(1.0, 0.0)\n"
               "bad = scale(a, (b, 1, 1))\n"
               "s = switch(pick, a, bad)\n"
               "output = s\n")
        g = parse_pcg(src).graph
        m = evaluate(g)  # the failing branch is never computed
        assert m.num_triangles == 12
        session = EvalSession(g)
        session.evaluate()
        assert "bad" not in session._cache and "b" not in session._cache
        with pytest.raises(EvalError) as e:
            evaluate(g, {"pick": False})
        assert e.value.code == "NumericError" and e.value.node_id == "b"

    def test_switch_toggle_returns_original_bitwise(self):
        src = ("input on: bool = true\na = cube()\nb = sphere(0.5, 4, 6)\n"
               "s = switch(on, a, b)\noutput = s\n")
        g = parse_pcg(src).graph
        session = EvalSession(g)
        m0 = session.evaluate()
        session.reevaluate({"on": False})
        m2 = session.reevaluate({"on": True})
        assert meshes_equal(m0, m2)

    def test_math_nodes(self):
        g = parse_pcg("a = add(2.0, 3.0)\nc = cube()\n"
                      "s = scale(c, (a, 1, 1))\noutput = s\n").graph
        m = evaluate(g)
        lo, hi = bounds(m)
        assert hi[0] - lo[0] == pytest.approx(5.0)

    def test_divide_by_zero_names_node(self):
        g = parse_pcg("d = divide(1.0, 0.0)\nc = cube()\n"
                      "s = scale(c, (d, 1, 1))\noutput = s\n").graph
        with pytest.raises(EvalError) as e:
            evaluate(g)
        assert e.value.code == "NumericError" and e.value.node_id == "d"

    def test_binding_type_error(self, table_graph):
        with pytest.raises(EvalError) as e:
            evaluate(table_graph, {"leg_height": True})
        assert e.value.code == "BindingTypeError"
        with pytest.raises(EvalError):
            evaluate(table_graph, {"nope": 1.0})

    def test_range_error(self, table_graph):
        with pytest.raises(EvalError) as e:
            evaluate(table_graph, {"leg_height": 99.0})
        assert e.value.code == "RangeError"

    def test_int_param_binding(self):
        g = parse_pcg("input n: int = 8 range 3..32\n"
                      "c = cylinder(1.0, 2.0, n)\noutput = c\n").graph
        assert evaluate(g, {"n": 5}).num_triangles == 20
        with pytest.raises(EvalError) as e:
            evaluate(g, {"n": 4.5})
        assert e.value.code == "BindingTypeError"
        with pytest.raises(EvalError):
            evaluate(g, {"n": 99})


class TestIncremental:
    def test_leg_height_keeps_top_bitwise(self, table_graph):
        session = EvalSession(table_graph)
        m0 = session.evaluate()
        m1 = session.reevaluate({"leg_height": 3.0})

        def top_verts(m):
            tag = [k for k, v in m.tag_names.items() if v == "top"][0]
            return m.vertices[np.unique(m.triangles[m.part_tags == tag])]

        def leg_verts(m):
            tag = [k for k, v in m.tag_names.items() if v == "leg"][0]
            return m.vertices[np.unique(m.triangles[m.part_tags == tag])]

        assert np.array_equal(top_verts(m0), top_verts(m1))
        assert not np.array_equal(leg_verts(m0), leg_verts(m1))
        assert meshes_equal(m1, evaluate(table_graph, {"leg_height": 3.0}))

    def test_empty_delta_returns_cached(self, table_graph):
        session = EvalSession(table_graph)
        m0 = session.evaluate()
        m1 = session.reevaluate({})
        assert m1 is m0
        assert session.last_recompute_count == 0

    def test_only_downstream_recomputed(self, table_graph):
        session = EvalSession(table_graph)
        session.evaluate()
        full = session.last_recompute_count
        session.reevaluate({"leg_height": 2.5})
        assert 0 < session.last_recompute_count < full

    @pytest.mark.parametrize("seed", range(20))
    def test_random_deltas_match_fresh_evaluate(self, seed):
        g = random_graph(seed)
        rng = random.Random(seed * 31 + 1)
        session = EvalSession(g, check=False)
        session.evaluate()
        values = {}
        for _ in range(5):
            delta = random_delta(g, rng)
            values.update(delta)
            got = session.reevaluate(delta)
            want = evaluate(g, values)
            assert meshes_equal(got, want)

    def test_failed_delta_leaves_session_intact(self, table_graph):
        session = EvalSession(table_graph)
        m0 = session.evaluate()
        with pytest.raises(EvalError):
            session.reevaluate({"leg_height": 99.0})
        assert meshes_equal(session.reevaluate({}), m0)
