import hashlib
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence

from trunc_hgm.arith.fields import PrimeFieldElement, QuadExtElement
from trunc_hgm.arith.poly import DensePolynomial
from trunc_hgm.arith.valres import ValuatedResidue

__all__ = [
    "CongruenceReport",
    "FIELDS",
    "VERDICTS",
    "encode_value",
    "NON_GATING",
    "SUPERCONGRUENCE_CHECK",
]

FIELDS = (
    "check_id",
    "p",
    "l",
    "j0",
    "z0",
    "branch",
    "lhs",
    "rhs",
    "verdict",
    "skip_reason",
    "ms",
)
VERDICTS = ("pass", "fail", "skip")

# mod p^2 comparison under the sign of the mod-p congruence
SUPERCONGRUENCE_CHECK = "supercongruence.mod-p-sign"
# informational checks, excluded from the exit status
NON_GATING = (SUPERCONGRUENCE_CHECK,)

# vectors longer than this are written as a digest
MAX_INLINE = 16


def _digest(parts) -> str:
    return hashlib.sha256(",".join(parts).encode()).hexdigest()[:16]


def encode_value(x: Any) -> Optional[str]:
    """Canonical string of a field element, integer, rational, vector or polynomial."""
    if x is None:
        return None
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (PrimeFieldElement, QuadExtElement)):
        return x.encode()
    if isinstance(x, (int, Fraction, str)):
        return str(x)
    if isinstance(x, ValuatedResidue):
        return str(x.residue(1))
    if isinstance(x, DensePolynomial):
        if x.degree < MAX_INLINE:
            return "[" + ",".join(map(str, x.to_list())) + "]"
        return f"poly(deg={x.degree},sha256={x.fingerprint()})"
    if isinstance(x, (list, tuple)):
        parts = [encode_value(v) for v in x]
        if len(parts) <= MAX_INLINE:
            return "[" + ",".join(parts) + "]"
        return f"vec(n={len(parts)},sha256={_digest(parts)})"
    if hasattr(x, "tolist"):
        return encode_value(x.tolist())
    raise TypeError(f"No report encoding for {type(x).__name__}.")


@dataclass(frozen=True)
class CongruenceReport:
    """Outcome of one check at one parameter instance.

    ``lhs`` and ``rhs`` hold canonical encodings; the verdict is ``pass`` iff
    they are equal. ``detail`` carries diagnostics for the human format and is
    never serialized.
    """

    check_id: str
    p: Optional[int]
    l: Optional[int] = None
    j0: Optional[str] = None
    z0: Optional[str] = None
    branch: Optional[str] = None
    lhs: Optional[str] = None
    rhs: Optional[str] = None
    verdict: str = "skip"
    skip_reason: Optional[str] = None
    ms: Optional[float] = None
    detail: Dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(
                f"Verdict {self.verdict} not recognized. Currently supported verdicts are: {list(VERDICTS)}"
            )
        if self.verdict == "skip" and not self.skip_reason:
            raise ValueError("A skipped report needs a skip_reason.")
        if self.verdict != "skip" and self.lhs is None:
            raise ValueError("A decided report needs both sides.")

    @classmethod
    def compare(
        cls,
        check_id: str,
        p: Optional[int],
        lhs: Any,
        rhs: Any,
        l: Optional[int] = None,
        j0: Any = None,
        z0: Any = None,
        branch: Optional[str] = None,
        detail: Optional[Dict[str, Any]] = None,
    ) -> "CongruenceReport":
        lhs_enc, rhs_enc = encode_value(lhs), encode_value(rhs)
        return cls(
            check_id=check_id,
            p=p,
            l=l,
            j0=encode_value(j0),
            z0=encode_value(z0),
            branch=branch,
            lhs=lhs_enc,
            rhs=rhs_enc,
            verdict="pass" if lhs_enc == rhs_enc else "fail",
            detail=dict(detail or {}),
        )

    @classmethod
    def skipped(
        cls,
        check_id: str,
        p: Optional[int],
        reason: str,
        l: Optional[int] = None,
        j0: Any = None,
        z0: Any = None,
        branch: Optional[str] = None,
        detail: Optional[Dict[str, Any]] = None,
    ) -> "CongruenceReport":
        return cls(
            check_id=check_id,
            p=p,
            l=l,
            j0=encode_value(j0),
            z0=encode_value(z0),
            branch=branch,
            verdict="skip",
            skip_reason=reason,
            detail=dict(detail or {}),
        )

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def failed(self) -> bool:
        return self.verdict == "fail"

    @property
    def gating(self) -> bool:
        return self.check_id not in NON_GATING

    def with_timing(self, ms: float) -> "CongruenceReport":
        return replace(self, ms=round(ms, 3))

    def to_record(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in FIELDS}

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> "CongruenceReport":
        missing = [name for name in FIELDS if name not in record]
        if missing:
            raise ValueError(f"Report record is missing fields {missing}.")
        return cls(**{name: record[name] for name in FIELDS})


def count_verdicts(reports: Sequence[CongruenceReport]) -> Dict[str, int]:
    counts = {v: 0 for v in VERDICTS}
    for r in reports:
        counts[r.verdict] += 1
    return counts
