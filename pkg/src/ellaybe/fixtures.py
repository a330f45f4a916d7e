"""Reader for the golden-value file produced by ``tools/make_golden.py``.

Each record is ``name, inputs..., re, im``; lines starting with ``#`` are comments.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path


def default_path() -> Path:
    return Path(str(resources.files("ellaybe") / "data" / "golden.txt"))


def load_golden(path=None) -> dict:
    """``{name: [(inputs, value), ...]}`` with inputs as strings."""
    path = Path(path) if path is not None else default_path()
    out = {}
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        name, inputs, re, im = fields[0], tuple(fields[1:-2]), fields[-2], fields[-1]
        out.setdefault(name, []).append((inputs, complex(float(re), float(im))))
    return out


def golden_deviations(path=None) -> dict:
    """Largest deviation of the package from each golden record family.

    Deviations are absolute for |value| <= 1 and relative above.
    """
    from . import closed_form as cf
    from . import geometric as gm
    from . import special_functions as sf

    g = load_golden(path)

    def _p(i):
        return cf.SolutionParams(int(i[0]), int(i[1]), c(*i[2:4]))

    def c(*parts):
        return complex(float(parts[0]), float(parts[1]))

    def ints(parts):
        return tuple(int(p) for p in parts)

    checks = {
        "theta1": lambda i: sf.theta1(c(*i[:2]), c(*i[2:])),
        "theta3": lambda i: sf.theta3(c(*i[:2]), c(*i[2:])),
        "theta1_deriv_zero": lambda i: sf.theta1_deriv_zero(c(*i)),
        "theta_shifted": lambda i: sf.theta_shifted(c(*i[:2]), c(*i[2:4]), c(*i[4:])),
        "reduce_multiplier_theta1":
            lambda i: sf.reduce_argument(c(*i[:2]), c(*i[2:]), "theta1").multiplier,
        "sigma": lambda i: sf.kronecker_sigma(c(*i[:2]), c(*i[2:4]), c(*i[4:])),
        "theta3_deriv_half_period": lambda i: sf.theta3_deriv_half_period(c(*i)),
        "r_elliptic": lambda i: cf.r_elliptic(_p(i), c(*i[4:6]), c(*i[6:8]), c(*i[8:10]))[ints(i[10:])],
        "res_map": lambda i: gm.res_map(
            _p(i), c(*i[4:6]), float(i[6]),
            gm.SolSpaceElement.unit(_p(i), c(*i[4:6]), float(i[6]), *ints(i[7:9])))[ints(i[9:])],
        "ev_map": lambda i: gm.ev_map(
            _p(i), c(*i[4:6]), float(i[6]), float(i[7]),
            gm.SolSpaceElement.unit(_p(i), c(*i[4:6]), float(i[6]), *ints(i[8:10])))[ints(i[10:])],
        "alpha_endo": lambda i: gm.alpha_endo(_p(i), c(*i[4:6]), float(i[6]),
                                              float(i[7]))[ints(i[8:])],
    }

    out = {}
    for name, records in g.items():
        if name not in checks:
            raise ValueError(f"unknown golden record {name!r}")
        out[name] = max(abs(complex(checks[name](i)) - val) / max(1.0, abs(val))
                        for i, val in records)
    return out
