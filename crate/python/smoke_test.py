"""Smoke test for the torus_morse_py extension module."""

import json
import math

import torus_morse_py as tm


def main():
    egg = tm.TrigField([(0.5, 1, -1), (-0.5, 1, 1)])
    assert abs(egg.value(0.25, 0.25) - math.sin(math.pi / 2) ** 2) < 1e-12
    assert len(egg.critical_points()) == 8
    assert egg.symmetry() == (2, (1, 2))

    report = json.loads(egg.analyze())
    assert report["classification"]["class"] == "F0"
    assert all(v["status"] == "pass" for v in report["verification"].values())

    tilted = tm.TrigField([(1.0, 1, 0), (0.5, 0, 1, 0.0)])
    graph = json.loads(tilted.reeb_json())
    assert (len(graph["vertices"]), len(graph["edges"]), graph["betti1"]) == (4, 4, 1)
    assert tilted.reeb_dot().count("style=bold") == 2

    text = tilted.analyze()
    passed, again = tm.reverify(text)
    assert passed and again == text

    symbolic = json.loads(tilted.analyze(verify=False, cyclic_index=2))
    assert symbolic["verification"] is None
    assert symbolic["classification"]["cyclic_index"] == 2

    assert tm.multiply("wrC(Z_2;2)", "((1,0),1)", "((0,1),1)") == "((0,0),0)"
    assert tm.invert("wrZ(Z_3;2)", "((1,2),5)") != "((1,2),5)"
    assert tm.is_central("wrC(Z_2;2)", "((1,1),0)")
    assert tm.smith_pair(["1/2,0", "0,1/2"]) == (2, 1)

    assert all(ok for _, ok in tm.verify_f0(1, 2, 2))
    f1 = dict(tm.verify_f1(1, [(1, 2)], trunc=2))
    assert len(f1) == 10 and all(f1.values())

    theta = json.loads(tm.theta_check(1, [(1, 2), (1, 3)]))
    assert theta["primitive"] and theta["torsion_free"]

    try:
        tm.multiply("wrC(Z_2;2)", "((1,0),7,7)", "((0,1),1)")
    except ValueError:
        pass
    else:
        raise AssertionError("bad element accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
