from trunc_hgm.curves import (
    check_cor_3_2,
    check_hypotheses,
    check_prop_3_4,
    check_root_square_criterion,
)
from trunc_hgm.hyperseries import check_factorial_congruence_3_3
from trunc_hgm.verify.suites.base import Suite, SuiteParams, by_j0, by_level, with_j0

META = {
    "section": "models of E1",
    "field": "F_p or F_{p^2}",
}


class TraceTransfer(Suite):
    """a_p(E0)^2 against a_P(E1)^2 (split) or -(-1/p) a_P(E1) (inert)."""

    suite_id = "3.2"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "a_p(E0)^2 is read off a_P(E1) over the quadratic layer",
                "kind": "curve",
                "varies": ["p", "j0"],
            }
        )

    def instances(self, params: SuiteParams):
        return by_j0(params)

    def run_instance(self, params: SuiteParams, p: int, j0):
        return check_cor_3_2(j0, p, params.bound)


class RootSquareCriterion(Suite):
    """For inert z0, sqrt(z0) is a square in F_{p^2} iff p = 3 mod 4."""

    suite_id = "3.2.root"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "sqrt(z0) is a square in F_{p^2} iff (-1/p) = -1",
                "kind": "field",
                "varies": ["p", "j0"],
            }
        )

    def instances(self, params: SuiteParams):
        return by_j0(params)

    def run_instance(self, params: SuiteParams, p: int, j0):
        z0 = check_hypotheses(j0, p)
        return with_j0(check_root_square_criterion(z0, p), j0)


class FactorialCongruence(Suite):
    """4^{3r} M!/(r!(2r)!(M-3r)!) against (-1)^{3r} (6r)!/(r!(2r)!(3r)!), M = (p^l-1)/2."""

    suite_id = "3.3"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "central factorial ratios reduce to the 6r-multinomials",
                "kind": "integer",
                "varies": ["p", "l"],
            }
        )

    def instances(self, params: SuiteParams):
        return by_level(params)

    def run_instance(self, params: SuiteParams, p: int, l: int):
        return check_factorial_congruence_3_3(p, l, params.precision)


class TraceAsSeries(Suite):
    """a_P(E1) against the 2F1 truncated at floor((N(P)-1)/6), at t = (1 - sqrt z0)/2."""

    suite_id = "3.4"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "a_P(E1) is the truncated 2F1 at (1 - sqrt z0)/2",
                "kind": "curve",
                "varies": ["p", "j0"],
            }
        )

    def instances(self, params: SuiteParams):
        return by_j0(params)

    def run_instance(self, params: SuiteParams, p: int, j0):
        z0 = check_hypotheses(j0, p)
        return with_j0(check_prop_3_4(z0, p, params.bound), j0)
