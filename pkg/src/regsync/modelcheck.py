"""Small-scope exhaustive model checking of the sync engine.

Enumerates every consistent initial global state over bounded chain and
asset counts, explores all sync sequences to a bounded depth (deduplicating
revisited states), and checks each successful sync against the protocol's
guarantees: cross-chain agreement, per-asset isolation, validity
preservation, guaranteed success under the combined premises, and
agreement with the generic multi-domain layer.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import engine
from .preservation import sync_all
from .regulatory import RegAction, RegState, reg_machine_spec, reg_transition
from .report import BudgetExceededError, enumeration_budget


@dataclass(frozen=True)
class SyncStep:
    source: str
    action: RegAction
    asset: str

    def to_json(self) -> dict:
        return {"source": self.source, "action": self.action.value, "asset": self.asset}


@dataclass(frozen=True)
class Counterexample:
    rule: str
    initial: engine.GlobalState
    steps: tuple[SyncStep, ...]
    detail: str = ""

    def to_scenario(self) -> dict:
        """Replayable scenario document reproducing the violation."""
        return {
            "state": engine.to_json_dict(self.initial),
            "sync": [s.to_json() for s in self.steps],
            "violation": {"rule": self.rule, "detail": self.detail},
        }


@dataclass
class ModelCheckResult:
    states_explored: int = 0
    syncs_checked: int = 0
    counterexamples: list[Counterexample] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def chain_names(n: int) -> list[str]:
    return [f"c{i+1}" for i in range(n)]


def asset_names(n: int) -> list[str]:
    return [f"a{i+1}" for i in range(n)]


def enumerate_initial_states(n_chains: int, n_assets: int):
    """All valid initial states: each asset sits on a non-empty chain subset
    in one of the five states, consistently, with no lock held."""
    chains = chain_names(n_chains)
    assets = asset_names(n_assets)
    subsets = [
        combo
        for size in range(1, n_chains + 1)
        for combo in itertools.combinations(chains, size)
    ]
    per_asset = [(subset, state) for subset in subsets for state in RegState]
    for assignment in itertools.product(per_asset, repeat=n_assets):
        tables: dict[str, dict[str, engine.AssetState]] = {c: {} for c in chains}
        for aid, (subset, state) in zip(assets, assignment):
            for c in subset:
                tables[c][aid] = engine.AssetState(aid, state, owner="owner")
        yield engine.GlobalState.make(tables)


def initial_state_count(n_chains: int, n_assets: int) -> int:
    return ((2**n_chains - 1) * len(RegState)) ** n_assets


def _state_key(gs: engine.GlobalState):
    # Explicit-false and absent lock entries denote the same state; fold
    # them together so revisits are recognized.
    doc = engine.to_json_dict(gs)
    doc["locks"] = {aid: True for aid, held in doc["locks"].items() if held}
    return json.dumps(doc, sort_keys=True)


def _check_edge(
    gs: engine.GlobalState,
    step: SyncStep,
    result: engine.SyncResult,
    out: ModelCheckResult,
    origin: tuple[engine.GlobalState, tuple[SyncStep, ...]],
) -> None:
    initial, steps = origin
    trail = steps + (step,)

    def report(rule: str, detail: str = "") -> None:
        out.counterexamples.append(Counterexample(rule, initial, trail, detail))

    current = engine.get_reg_state(gs, step.source, step.asset)
    expected = None if current is None else reg_transition(current, step.action)
    premises = (
        engine.valid_state(gs)
        and current is not None
        and expected is not None
        and not engine.is_locked(gs, step.asset)
    )
    if premises and not result.ok:
        report("combined_success", f"sync failed with {result.reason.value}")
        return
    if not result.ok:
        return

    gs2 = result.state
    for c in sorted(engine.connected_chains(gs, step.asset)):
        if engine.get_reg_state(gs2, c, step.asset) is not expected:
            report("cross_domain_consistency", f"chain {c} disagrees")
    for c, table in gs.chains.items():
        for aid, rec in table.items():
            after = gs2.chains.get(c, {}).get(aid)
            if aid != step.asset:
                if after != rec:
                    report("sync_isolation", f"cell ({c}, {aid}) changed")
            elif after is None or after.owner != rec.owner:
                report("owner_untouched", f"cell ({c}, {aid})")
    for c, table in gs2.chains.items():
        for aid in table:
            if aid not in gs.chains.get(c, {}):
                report("sync_isolation", f"cell ({c}, {aid}) appeared")
    if engine.is_locked(gs2, step.asset):
        report("lock_released")
    if engine.valid_state(gs) and not engine.valid_state(gs2):
        report("valid_state_preservation")

    # Generic/concrete agreement on the multi-domain projection.
    if not engine.is_locked(gs, step.asset):
        generic = sync_all(
            engine.to_domain_state_map(gs),
            step.source,
            step.action.value,
            step.asset,
            reg_machine_spec(),
        )
        if generic is None:
            report("generic_agreement", "generic sync_all failed where sync succeeded")
        elif dict(generic.table) != dict(engine.to_domain_state_map(gs2).table):
            report("generic_agreement", "projections differ")


def run_modelcheck(
    n_chains: int,
    n_assets: int,
    depth: int,
    budget: Optional[int] = None,
    sync_fn: Callable[..., engine.SyncResult] = engine.sync,
) -> ModelCheckResult:
    """Breadth-first exploration from every valid initial state.

    ``sync_fn`` exists so mutation tests can swap in a broken engine and
    confirm the checker finds a counterexample.
    """
    budget = enumeration_budget() if budget is None else budget
    triples = [
        SyncStep(c, a, aid)
        for c in chain_names(n_chains)
        for a in RegAction
        for aid in asset_names(n_assets)
    ]
    estimated = initial_state_count(n_chains, n_assets) * len(triples)
    if estimated > budget:
        raise BudgetExceededError(estimated, budget)

    out = ModelCheckResult()
    visited: dict[str, None] = {}
    frontier: list[tuple[engine.GlobalState, tuple[engine.GlobalState, tuple[SyncStep, ...]]]] = []
    for gs in enumerate_initial_states(n_chains, n_assets):
        key = _state_key(gs)
        if key not in visited:
            visited[key] = None
            frontier.append((gs, (gs, ())))
    out.states_explored = len(frontier)

    for _ in range(depth):
        next_frontier = []
        for gs, origin in frontier:
            for step in triples:
                out.syncs_checked += 1
                if out.syncs_checked > budget:
                    raise BudgetExceededError(out.syncs_checked, budget)
                result = sync_fn(step.source, step.action, step.asset, gs)
                _check_edge(gs, step, result, out, origin)
                if result.ok:
                    key = _state_key(result.state)
                    if key not in visited:
                        visited[key] = None
                        initial, steps = origin
                        next_frontier.append(
                            (result.state, (initial, steps + (step,)))
                        )
        frontier = next_frontier
        out.states_explored = len(visited)
    out.counterexamples.sort(key=lambda ce: (len(ce.steps), ce.rule))
    return out
