from trunc_hgm.hyperseries import (
    check_closed_forms,
    check_term_vanishing,
    check_truncated_clausen,
)
from trunc_hgm.verify.suites.base import Suite, SuiteParams, by_j0, by_level
from trunc_hgm.verify.theorem import check_branch_proposition

META = {
    "section": "truncation",
    "field": "F_p",
}


class TermVanishing(Suite):
    """Terms with floor((p^l-1)/6) < r <= p^l - 1 vanish mod p, for 2F1 and 3F2."""

    suite_id = "4.vanish"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "the tail of both sums below p^l vanishes mod p",
                "kind": "series",
                "varies": ["p", "l"],
            }
        )

    def instances(self, params: SuiteParams):
        return by_level(params)

    def run_instance(self, params: SuiteParams, p: int, l: int):
        return check_term_vanishing(p, l)


class ClosedForms(Suite):
    """Pochhammer coefficients against their (6r)! closed forms."""

    suite_id = "4.terms"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "c_r equal (6r)!/(r!^3 (3r)! 1728^r) and its 2F1 analogue",
                "kind": "series",
                "varies": ["p"],
            }
        )

    def instances(self, params: SuiteParams):
        return [{"p": p} for p in params.primes]

    def run_instance(self, params: SuiteParams, p: int):
        return check_closed_forms(p, params.r_max, max(2, params.precision))


class TruncatedClausen(Suite):
    """2F1(t)^2 against 3F2(4t(1-t)), both truncated at floor((p^l-1)/6)."""

    suite_id = "4.3"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "Clausen's formula survives truncation mod p",
                "kind": "polynomial",
                "varies": ["p", "l"],
            }
        )

    def instances(self, params: SuiteParams):
        return by_level(params)

    def run_instance(self, params: SuiteParams, p: int, l: int):
        return check_truncated_clausen(p, l)


class SplitBranch(Suite):
    """a_p(E0)^2 and 2F1((1 - s)/2)^2 against the signed 3F2, z0 a square mod p."""

    suite_id = "final.4"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "the congruence through E1 when z0 splits",
                "kind": "curve",
                "varies": ["p", "j0"],
            }
        )

    def instances(self, params: SuiteParams):
        return by_j0(params)

    def run_instance(self, params: SuiteParams, p: int, j0):
        return check_branch_proposition(j0, p, "split", params.bound)
