"""Smoke test for the knotkit_py extension module.

Build and run with
    maturin develop --release && python python/smoke_test.py
or copy the cdylib next to this script as knotkit_py.so.
"""

import json

import knotkit_py as kk


def main():
    fig8 = kk.Diagram.named("4_1")
    dims = kk.homology(fig8)
    assert dims.total_dim == 5, dims
    assert dims.delta_support() == {0: 5}
    assert kk.homology(fig8, "F2", naive=True).items() == kk.homology(fig8, "F2").items()

    trefoil = kk.Diagram("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]")
    assert kk.homology(trefoil).items() == [(0, 2, 1), (2, 6, 1), (3, 8, 1)]
    assert trefoil.mirror().writhe == -3
    assert kk.jones(trefoil) == "-t^4 + t^3 + t"

    assert kk.alexander(kk.Diagram.named("5_2")) == "2*t - 3 + 2*t^-1"
    assert kk.determinant(kk.Diagram.pretzel(-3, 3, 1)) == "9"

    report = kk.detect(fig8, "4_1")
    assert report.verdict == "FigureEight"
    assert json.loads(report.to_json())["det"] == 5
    assert kk.detect(kk.Diagram.named("T(2,5)")).s_thin == 4

    assert kk.compare_fields(kk.Diagram.named("13n_4639"), 2) == (11, 19, 4, True)
    assert kk.cyclotomic_poly(10) == "t^4 - t^3 + t^2 - t + 1"
    assert [r[1] for r in kk.scan_ph(4)] == [True, True, False, False]

    try:
        kk.Diagram("PD[X[1,1,1,1]]")
    except ValueError:
        pass
    else:
        raise AssertionError("invalid PD accepted")
    print("knotkit_py smoke test passed")


if __name__ == "__main__":
    main()
