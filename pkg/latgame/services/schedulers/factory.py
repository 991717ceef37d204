"""Scheduler factory."""
from typing import Optional

from latgame.config import settings
from latgame.services.schedulers.active_set import ActiveSetScheduler
from latgame.services.schedulers.base import BaseScheduler
from latgame.services.schedulers.naive import NaiveScheduler


def create_scheduler(scheme: Optional[str] = None) -> BaseScheduler:
    """Create a scheduler by name.

    Args:
        scheme: "naive" or "active". If None, use the scheme specified in settings.

    Returns:
        BaseScheduler instance.
    """
    scheme = (scheme or settings.DEFAULT_SCHEME).lower()

    if scheme == "naive":
        return NaiveScheduler()
    elif scheme == "active":
        return ActiveSetScheduler()
    else:
        raise ValueError(f"Unsupported scheduler scheme: {scheme}")
