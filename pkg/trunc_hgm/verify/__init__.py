from trunc_hgm.verify.supercongruence import (
    CM_J_INVARIANTS,
    supercongruence_check,
    supercongruence_range,
)
from trunc_hgm.verify.suites import (
    SuiteParams,
    get_suite,
    run_all_suites,
    run_lemma_suite,
    suite_registry,
)
from trunc_hgm.verify.sweep import JPolicy, run_parallel, scan_range
from trunc_hgm.verify.theorem import (
    TheoremInstance,
    check_branch_proposition,
    theorem_instance,
    verify_chain,
    verify_theorem,
)
