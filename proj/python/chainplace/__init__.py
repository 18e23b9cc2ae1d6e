"""Service-chain placement engine.

Thin wrapper over the compiled module; every payload is one of the JSON/CSV
documents described in docs/file-formats.md, so results round-trip with the
``chainplace`` CLI unchanged.
"""

from chainplace._core import (
    Error,
    export_lp,
    gen_instance,
    orchestrate,
    plot,
    run_experiment,
    solve,
    verify,
)

__all__ = [
    "Error",
    "export_lp",
    "gen_instance",
    "orchestrate",
    "plot",
    "run_experiment",
    "solve",
    "verify",
]
