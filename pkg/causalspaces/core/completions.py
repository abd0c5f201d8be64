import logging

from .bitset import iter_bits
from .errors import FREE_CHOICE, SIZE_GUARD
from .search import ClosureSearch
from .settings import settings
from .space import HistorySpace, free_choice, is_causally_complete

logger = logging.getLogger(__name__)


def causal_completions(
    space: HistorySpace, *, max_optional: int | None = None
) -> list[HistorySpace]:
    """Maximal causally complete refinements of a free-choice space.

    Refinements have larger extended sets, so the completions are the
    inclusion-minimal join-closed solutions containing Ext(space).
    """
    if not free_choice(space):
        raise FREE_CHOICE(
            "causal completions are only defined for spaces satisfying free choice"
        )
    if is_causally_complete(space):
        return [space]

    search = ClosureSearch(space.family, forced=space.ext)
    undecided = sum(1 for forced in search.forced_at if not forced)
    limit = settings.MAX_COMPLETION_OPTIONAL if max_optional is None else max_optional
    if undecided > limit:
        raise SIZE_GUARD(
            f"{undecided} undecided partial functions exceed the completion guard of {limit}"
        )

    minimal: list[int] = []
    for members in sorted(search.solutions(), key=lambda m: (m.bit_count(), m)):
        if not any(kept & members == kept for kept in minimal):
            minimal.append(members)

    universe = space.universe
    completions = sorted(
        (HistorySpace(space.family, tuple(universe.prime(list(iter_bits(m))))) for m in minimal),
        key=lambda s: s.codes,
    )
    logger.debug(f"found {len(completions)} causal completions")
    return completions
