from trunc_hgm.curves import build_E0, check_squares_equal, check_twist_gamma
from trunc_hgm.verify.suites.base import Suite, SuiteParams, by_j0

META = {
    "section": "twists",
    "field": "F_p or F_{p^2}",
}


class TwistGamma(Suite):
    """gamma(E0, E1') against z0 sqrt(z0) in the residue field, both roots."""

    suite_id = "2.1"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "E0 and E1' are twists by z0 sqrt(z0)",
                "kind": "curve",
                "varies": ["p", "j0"],
            }
        )

    def instances(self, params: SuiteParams):
        return by_j0(params)

    def run_instance(self, params: SuiteParams, p: int, j0):
        return check_twist_gamma(j0, p)


class SquaresEqual(Suite):
    """a_p(E0)^2 against a_p of its quadratic twists by d, squared."""

    suite_id = "2.2"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "twists with the same j have equal squared traces",
                "kind": "curve",
                "varies": ["p", "j0", "d"],
            }
        )

    def instances(self, params: SuiteParams):
        return [
            dict(inst, d=d) for inst in by_j0(params) for d in params.twist_factors
        ]

    def run_instance(self, params: SuiteParams, p: int, j0, d: int):
        E0 = build_E0(j0)
        report = check_squares_equal(E0, E0.quadratic_twist(d), p, params.bound)
        report.detail["d"] = d
        return report
