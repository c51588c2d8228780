from trunc_hgm.curves import check_hypotheses
from trunc_hgm.errors import ResourceLimitError
from trunc_hgm.hyperseries import (
    DEFAULT_DEGREE_CAP,
    check_binomial_reduction,
    check_cor_5_4,
    check_lemma_5_1,
    check_p2_factorization,
    check_reflection,
)
from trunc_hgm.verify.suites.base import Suite, SuiteParams, by_j0, by_level, with_j0
from trunc_hgm.verify.theorem import check_branch_proposition

META = {
    "section": "lifting to p^2",
    "field": "F_p or F_{p^2}",
}


class PochhammerLift(Suite):
    """(a)_{m p^l}/(m p^l)! against (a')_m/m! mod p."""

    suite_id = "5.1"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "Pochhammer ratios at multiples of p^l reduce to a'",
                "kind": "series",
                "varies": ["p", "l", "a"],
            }
        )

    def instances(self, params: SuiteParams):
        return [dict(inst, a=a) for inst in by_level(params) for a in params.a_values]

    def run_instance(self, params: SuiteParams, p: int, l: int, a):
        return check_lemma_5_1(a, p, l, params.m_max)


class SquareFactorization(Suite):
    """2F1(t)_{p^2l-1} against 2F1(t)_{p^l-1} 2F1(t^{p^l})_{p^l-1}."""

    suite_id = "5.2"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "the sum truncated at p^2l - 1 factors through t^(p^l)",
                "kind": "polynomial",
                "varies": ["p", "l"],
            }
        )

    def instances(self, params: SuiteParams):
        return by_level(params)

    def run_instance(self, params: SuiteParams, p: int, l: int):
        cap = params.degree_cap
        if cap is None:
            if l > 1:
                raise ResourceLimitError(
                    f"l = {l} compares degree {p ** (2 * l) - 1}; set a degree cap to run it."
                )
            cap = DEFAULT_DEGREE_CAP
        return check_p2_factorization(p, l, cap)


class Reflection(Suite):
    """2F1(t) against (-1)^((p^l-1)/2) 2F1(1 - t), truncated at floor((p^l-1)/6)."""

    suite_id = "5.3"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "the truncated 2F1 is symmetric under t -> 1 - t up to sign",
                "kind": "polynomial",
                "varies": ["p", "l"],
            }
        )

    def instances(self, params: SuiteParams):
        return by_level(params)

    def run_instance(self, params: SuiteParams, p: int, l: int):
        return check_reflection(p, l)


class BinomialReduction(Suite):
    """(-1)^r (a)_r/r! against binom([-a]_0, r), and the 2F1 as a binomial sum."""

    suite_id = "5.3.binom"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "Pochhammer ratios of p-integral parameters are binomials mod p",
                "kind": "series",
                "varies": ["p", "l"],
            }
        )

    def instances(self, params: SuiteParams):
        return by_level(params)

    def run_instance(self, params: SuiteParams, p: int, l: int):
        return check_binomial_reduction(p, l)


class InertSquare(Suite):
    """2F1((1 - s)/2)_{p^2-1} against (-1/p) 2F1((1 - s)/2)_{p-1}^2 in F_{p^2}."""

    suite_id = "5.4"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "for inert z0 the long sum is a signed square of the short one",
                "kind": "series",
                "varies": ["p", "j0"],
            }
        )

    def instances(self, params: SuiteParams):
        return by_j0(params)

    def run_instance(self, params: SuiteParams, p: int, j0):
        z0 = check_hypotheses(j0, p)
        return with_j0(check_cor_5_4(z0, p), j0)


class InertBranch(Suite):
    """a_p(E0)^2 and -(-1/p) 2F1((1 - s)/2)_{floor((p^2-1)/6)} against the signed 3F2."""

    suite_id = "final.5"

    def __init__(self):
        super().__init__(META)
        self.META.update(
            {
                "statement": "the congruence through E1 when z0 is inert",
                "kind": "curve",
                "varies": ["p", "j0"],
            }
        )

    def instances(self, params: SuiteParams):
        return by_j0(params)

    def run_instance(self, params: SuiteParams, p: int, j0):
        return check_branch_proposition(j0, p, "inert", params.bound)
