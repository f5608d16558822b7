"""Global multi-chain state and the atomic lock-validate-update-unlock sync.

Every operation is pure: it returns a fresh GlobalState and never mutates
its input, so failed syncs leave no partial writes behind.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from typing import Mapping, Optional

from .preservation import DomainStateMap
from .regulatory import RegAction, RegState, reg_transition
from .report import ValidationReport

ChainId = str
AssetKey = str


@dataclass(frozen=True)
class AssetState:
    asset_id: AssetKey
    reg_state: RegState
    owner: str
    locked: bool = False


@dataclass(frozen=True)
class GlobalState:
    """Per-chain asset tables plus the authoritative per-asset lock map.

    AssetState.locked is a maintained mirror of ``locks``; the lock map is
    the source of truth.
    """

    chains: Mapping[ChainId, Mapping[AssetKey, AssetState]]
    locks: Mapping[AssetKey, bool]

    @staticmethod
    def make(
        chains: Mapping[ChainId, Mapping[AssetKey, AssetState]],
        locks: Optional[Mapping[AssetKey, bool]] = None,
    ) -> "GlobalState":
        locks = dict(locks or {})
        fixed = {
            c: {
                aid: replace(rec, asset_id=aid, locked=locks.get(aid, False))
                for aid, rec in table.items()
            }
            for c, table in chains.items()
        }
        return GlobalState(fixed, locks)


class SyncFailure(enum.Enum):
    ASSET_NOT_FOUND = "AssetNotFound"
    INVALID_TRANSITION = "InvalidTransition"
    LOCKED = "Locked"


@dataclass(frozen=True)
class SyncResult:
    """Success carries the new GlobalState; failure carries a reason tag."""

    state: Optional[GlobalState] = None
    reason: Optional[SyncFailure] = None

    @property
    def ok(self) -> bool:
        return self.state is not None

    @staticmethod
    def success(gs: GlobalState) -> "SyncResult":
        return SyncResult(state=gs)

    @staticmethod
    def failure(reason: SyncFailure) -> "SyncResult":
        return SyncResult(reason=reason)


def get_reg_state(gs: GlobalState, c: ChainId, aid: AssetKey) -> Optional[RegState]:
    rec = gs.chains.get(c, {}).get(aid)
    return None if rec is None else rec.reg_state


def asset_exists(gs: GlobalState, c: ChainId, aid: AssetKey) -> bool:
    return get_reg_state(gs, c, aid) is not None


def connected_chains(gs: GlobalState, aid: AssetKey) -> frozenset[ChainId]:
    return frozenset(c for c in gs.chains if aid in gs.chains[c])


def is_locked(gs: GlobalState, aid: AssetKey) -> bool:
    return gs.locks.get(aid, False)


def _with_lock(gs: GlobalState, aid: AssetKey, flag: bool) -> GlobalState:
    locks = dict(gs.locks)
    locks[aid] = flag
    chains = {
        c: (
            {**table, aid: replace(table[aid], locked=flag)} if aid in table else table
        )
        for c, table in gs.chains.items()
    }
    return GlobalState(chains, locks)


def acquire_lock(gs: GlobalState, aid: AssetKey) -> Optional[GlobalState]:
    if is_locked(gs, aid):
        return None
    return _with_lock(gs, aid, True)


def release_lock(gs: GlobalState, aid: AssetKey) -> GlobalState:
    if not is_locked(gs, aid):
        return gs
    return _with_lock(gs, aid, False)


def update_all_chains(
    gs: GlobalState, aid: AssetKey, new_state: RegState, targets: frozenset[ChainId]
) -> GlobalState:
    for c in targets:
        assert aid in gs.chains.get(c, {}), f"target {c} does not hold {aid}"
    chains = {
        c: (
            {**table, aid: replace(table[aid], reg_state=new_state)}
            if c in targets
            else table
        )
        for c, table in gs.chains.items()
    }
    return GlobalState(chains, gs.locks)


def sync(source: ChainId, action: RegAction, aid: AssetKey, gs: GlobalState) -> SyncResult:
    """Atomically propagate one regulatory transition to all connected chains.

    Five steps in order: read state at the source, validate the transition,
    acquire the per-asset lock, update every connected chain, release the
    lock. Any failure aborts with no partial state.
    """
    current = get_reg_state(gs, source, aid)
    if current is None:
        return SyncResult.failure(SyncFailure.ASSET_NOT_FOUND)
    new_state = reg_transition(current, action)
    if new_state is None:
        return SyncResult.failure(SyncFailure.INVALID_TRANSITION)
    gs_locked = acquire_lock(gs, aid)
    if gs_locked is None:
        return SyncResult.failure(SyncFailure.LOCKED)
    # Targets are read from the pre-lock state, as in the protocol
    # definition; acquire_lock leaves chain contents untouched so the two
    # readings coincide.
    targets = connected_chains(gs, aid)
    gs_updated = update_all_chains(gs_locked, aid, new_state, targets)
    return SyncResult.success(release_lock(gs_updated, aid))


def consistent_state(gs: GlobalState) -> bool:
    seen: dict[AssetKey, RegState] = {}
    for table in gs.chains.values():
        for aid, rec in table.items():
            if aid in seen and seen[aid] is not rec.reg_state:
                return False
            seen[aid] = rec.reg_state
    return True


def no_lock_held(gs: GlobalState) -> bool:
    return not any(gs.locks.values())


def valid_state(gs: GlobalState) -> bool:
    """Cross-chain agreement per asset plus no lock held at rest."""
    return consistent_state(gs) and no_lock_held(gs)


def mirror_consistent(gs: GlobalState) -> bool:
    for table in gs.chains.values():
        for aid, rec in table.items():
            if rec.asset_id != aid or rec.locked != is_locked(gs, aid):
                return False
    return True


def check_combined(
    gs: GlobalState, source: ChainId, action: RegAction, aid: AssetKey
) -> ValidationReport:
    """Check the combined guarantee: under its premises, sync succeeds and
    the result is valid."""
    report = ValidationReport()
    current = get_reg_state(gs, source, aid)
    premises = (
        valid_state(gs)
        and current is not None
        and reg_transition(current, action) is not None
        and not is_locked(gs, aid)
    )
    if not premises:
        report.note("premises unmet")
        return report
    result = sync(source, action, aid, gs)
    if not result.ok:
        report.add("sync_success", (source, action.value, aid), f"failed: {result.reason.value}")
        return report
    if not valid_state(result.state):
        report.add("valid_state_preservation", (source, action.value, aid))
    return report


def to_domain_state_map(gs: GlobalState) -> DomainStateMap:
    """Project chains to the generic multi-domain layer (reg_state only)."""
    table = {
        (c, aid): rec.reg_state.value
        for c, chain in gs.chains.items()
        for aid, rec in chain.items()
    }
    return DomainStateMap(frozenset(gs.chains), table)


def to_json_dict(gs: GlobalState) -> dict:
    return {
        "chains": {
            c: {
                aid: {
                    "state": rec.reg_state.value,
                    "owner": rec.owner,
                    "locked": rec.locked,
                }
                for aid, rec in table.items()
            }
            for c, table in gs.chains.items()
        },
        "locks": dict(gs.locks),
    }


def from_json_dict(doc: dict) -> GlobalState:
    chains = {
        c: {
            aid: AssetState(
                asset_id=aid,
                reg_state=RegState(cell["state"]),
                owner=cell.get("owner", ""),
                locked=bool(cell.get("locked", False)),
            )
            for aid, cell in table.items()
        }
        for c, table in doc.get("chains", {}).items()
    }
    return GlobalState.make(chains, {a: bool(b) for a, b in doc.get("locks", {}).items()})


def canonical_dumps(gs: GlobalState) -> str:
    """Canonical JSON form: sorted keys, stable layout, trailing newline."""
    return json.dumps(to_json_dict(gs), sort_keys=True, indent=2) + "\n"
