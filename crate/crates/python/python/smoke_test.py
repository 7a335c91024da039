"""Smoke test for the johnson_pst extension module.

Build and run:

    cd crates/python
    maturin develop --release
    python python/smoke_test.py
"""

import cmath
import json
import math

import johnson_pst as jp


def main():
    sp = jp.spectrum(2, exact=True)
    assert sp["support"] == ["4", "0", "-2"], sp
    assert sp["weights"] == ["1/6", "1/2", "1/3"], sp

    d = jp.Design(2)
    j = d.couplings
    assert abs(j[0] + math.pi / 2) < 1e-12 and abs(j[1]) < 1e-12 and abs(j[2] - math.pi / 2) < 1e-12, j

    f = d.amplitudes(d.t0)
    assert abs(abs(f[-1]) - 1) < 1e-12, f
    assert abs(sum(abs(z) ** 2 for z in d.amplitudes(0.37)) - 1) < 1e-12

    report = d.verify("all")
    assert report["passed"], report
    assert abs(report["ghz_fidelity"] - 1) < 1e-10, report

    d3 = jp.Design(3, t0=2.0, theta=math.pi / 3, l_offsets=[0, 1, -1, 2])
    ghz = d3.heisenberg()
    assert ghz["ideal_distance"] < 1e-9, ghz
    assert abs(cmath.phase(ghz["vacuum_phase"] * ghz["amplitude_to_antipode"].conjugate())) < 1e-9

    back = jp.Design.from_json(d3.to_json())
    assert back.couplings == d3.couplings
    assert json.loads(d3.to_json())["schema_version"] == "1"

    tampered = d.with_couplings([j[0], j[1] + 0.1, j[2]])
    assert not tampered.verify("spectral")["passed"]

    times, amps = d.sweep(0.0, 2.0, 201)
    peak = max(range(len(times)), key=lambda i: abs(amps[i][-1]))
    assert abs(times[peak] - 1.0) < 1e-12

    g = jp.JohnsonGraph(6, 3)
    assert len(g) == 20 and g.diameter == 3
    assert g.intersection_numbers() == ([9, 4, 1], [1, 4, 9])
    assert g.distance(0, g.antipode(0)) == 3

    try:
        jp.Design(20).verify("dense")
    except jp.CapacityError:
        pass
    else:
        raise AssertionError("dense oracle should be infeasible for m = 20")

    try:
        jp.Design(0)
    except ValueError:
        pass
    else:
        raise AssertionError("m = 0 accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
