from .errors import TruncHgmError
from .find_suite import find_suite
from .reports import CongruenceReport
from .verify import (
    JPolicy,
    SuiteParams,
    run_lemma_suite,
    scan_range,
    supercongruence_check,
    verify_chain,
    verify_theorem,
)

__version__ = "0.1.0"
