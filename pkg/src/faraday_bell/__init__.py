"""Heralded spin-photon Bell test: state preparation, CHSH regions, cavity
reflection, loophole-free timing budgets and DI-QKD key rates."""

__version__ = "0.1.0"

from . import bell, cavity, diqkd, feasibility, protocol, qstate  # noqa: E402,F401
from .protocol import Convention, InteractionParams  # noqa: E402,F401
