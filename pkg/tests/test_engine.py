import pytest

from regsync import engine
from regsync.engine import SyncFailure
from regsync.preservation import check_consistent_init, sync_all
from regsync.regulatory import RegAction, RegState, reg_machine_spec

from conftest import make_state


class TestReads:
    def test_get_reg_state(self, two_chain_active):
        assert engine.get_reg_state(two_chain_active, "c1", "a1") is RegState.ACTIVE

    def test_absent_asset(self, two_chain_active):
        assert engine.get_reg_state(two_chain_active, "c2", "a2") is None

    def test_unknown_chain(self, two_chain_active):
        assert engine.get_reg_state(two_chain_active, "c9", "a1") is None

    def test_asset_exists(self, two_chain_active):
        assert engine.asset_exists(two_chain_active, "c1", "a2")
        assert not engine.asset_exists(two_chain_active, "c2", "a2")

    def test_connected_chains(self, two_chain_active):
        assert engine.connected_chains(two_chain_active, "a1") == frozenset({"c1", "c2"})
        assert engine.connected_chains(two_chain_active, "a2") == frozenset({"c1"})
        assert engine.connected_chains(two_chain_active, "nowhere") == frozenset()


class TestLocks:
    def test_acquire_then_release(self, two_chain_active):
        locked = engine.acquire_lock(two_chain_active, "a1")
        assert engine.is_locked(locked, "a1")
        assert locked.chains["c1"]["a1"].locked
        # reg states untouched
        for c in ("c1", "c2"):
            assert locked.chains[c]["a1"].reg_state is RegState.ACTIVE
        released = engine.release_lock(locked, "a1")
        assert not engine.is_locked(released, "a1")
        assert not released.chains["c1"]["a1"].locked

    def test_double_acquire_fails(self, two_chain_active):
        locked = engine.acquire_lock(two_chain_active, "a1")
        assert engine.acquire_lock(locked, "a1") is None

    def test_lock_is_per_asset(self, two_chain_active):
        locked = engine.acquire_lock(two_chain_active, "a2")
        assert not engine.is_locked(locked, "a1")

    def test_release_of_free_lock_is_identity(self, two_chain_active):
        assert engine.release_lock(two_chain_active, "a1") == two_chain_active

    def test_input_never_mutated(self, two_chain_active):
        engine.acquire_lock(two_chain_active, "a1")
        assert not engine.is_locked(two_chain_active, "a1")

    def test_mirror_consistency(self, two_chain_active):
        locked = engine.acquire_lock(two_chain_active, "a1")
        assert engine.mirror_consistent(locked)
        assert engine.mirror_consistent(engine.release_lock(locked, "a1"))


class TestUpdateAllChains:
    def test_updates_exactly_targets(self, two_chain_active):
        updated = engine.update_all_chains(
            two_chain_active, "a1", RegState.FROZEN, frozenset({"c1", "c2"})
        )
        assert updated.chains["c1"]["a1"].reg_state is RegState.FROZEN
        assert updated.chains["c2"]["a1"].reg_state is RegState.FROZEN
        assert updated.chains["c1"]["a2"] == two_chain_active.chains["c1"]["a2"]

    def test_empty_targets_is_identity(self, two_chain_active):
        assert (
            engine.update_all_chains(two_chain_active, "a1", RegState.FROZEN, frozenset())
            == two_chain_active
        )

    def test_missing_target_asserts(self, two_chain_active):
        with pytest.raises(AssertionError):
            engine.update_all_chains(
                two_chain_active, "a2", RegState.FROZEN, frozenset({"c2"})
            )


class TestSync:
    def test_successful_freeze(self, two_chain_active):
        result = engine.sync("c1", RegAction.FREEZE, "a1", two_chain_active)
        assert result.ok
        gs = result.state
        assert engine.get_reg_state(gs, "c1", "a1") is RegState.FROZEN
        assert engine.get_reg_state(gs, "c2", "a1") is RegState.FROZEN
        assert not engine.is_locked(gs, "a1")
        assert engine.valid_state(gs)

    def test_asset_not_found(self, two_chain_active):
        result = engine.sync("c2", RegAction.FREEZE, "a2", two_chain_active)
        assert result.reason is SyncFailure.ASSET_NOT_FOUND

    def test_invalid_transition(self):
        gs = make_state({"c1": {"a1": RegState.CONFISCATED}})
        for action in RegAction:
            result = engine.sync("c1", action, "a1", gs)
            assert result.reason is SyncFailure.INVALID_TRANSITION

    def test_locked(self, two_chain_active):
        locked = engine.acquire_lock(two_chain_active, "a1")
        result = engine.sync("c1", RegAction.FREEZE, "a1", locked)
        assert result.reason is SyncFailure.LOCKED
        assert engine.is_locked(locked, "a1")  # input untouched

    def test_other_assets_bit_identical(self, two_chain_active):
        result = engine.sync("c1", RegAction.SEIZE, "a1", two_chain_active)
        assert result.state.chains["c1"]["a2"] == two_chain_active.chains["c1"]["a2"]

    def test_owner_untouched(self, two_chain_active):
        result = engine.sync("c1", RegAction.SEIZE, "a1", two_chain_active)
        assert result.state.chains["c1"]["a1"].owner == "owner"


class TestValidState:
    def test_agreeing_unlocked_state(self, two_chain_active):
        assert engine.valid_state(two_chain_active)

    def test_disagreement_fails(self):
        gs = make_state({"c1": {"a1": RegState.ACTIVE}, "c2": {"a1": RegState.FROZEN}})
        assert not engine.valid_state(gs)

    def test_held_lock_fails(self, two_chain_active):
        assert not engine.valid_state(engine.acquire_lock(two_chain_active, "a1"))


class TestCheckCombined:
    def test_premises_met(self, two_chain_active):
        report = engine.check_combined(two_chain_active, "c1", RegAction.FREEZE, "a1")
        assert report.ok and not report.notes

    def test_locked_is_vacuous(self, two_chain_active):
        locked = engine.acquire_lock(two_chain_active, "a1")
        report = engine.check_combined(locked, "c1", RegAction.FREEZE, "a1")
        assert report.ok and "premises unmet" in report.notes

    def test_undefined_transition_is_vacuous(self, two_chain_active):
        report = engine.check_combined(two_chain_active, "c1", RegAction.UNFREEZE, "a1")
        assert report.ok and "premises unmet" in report.notes


class TestGenericBridge:
    def test_projection_is_consistent(self, two_chain_active):
        assert check_consistent_init(engine.to_domain_state_map(two_chain_active)).ok

    def test_sync_agrees_with_generic_sync_all(self, two_chain_active):
        sm = reg_machine_spec()
        for action in RegAction:
            concrete = engine.sync("c1", action, "a1", two_chain_active)
            generic = sync_all(
                engine.to_domain_state_map(two_chain_active), "c1", action.value, "a1", sm
            )
            assert concrete.ok == (generic is not None)
            if concrete.ok:
                assert dict(engine.to_domain_state_map(concrete.state).table) == dict(
                    generic.table
                )


class TestCanonicalJson:
    def test_round_trip(self, two_chain_active):
        text = engine.canonical_dumps(two_chain_active)
        parsed = engine.from_json_dict(__import__("json").loads(text))
        assert engine.canonical_dumps(parsed) == text
        assert parsed == two_chain_active

    def test_keys_sorted(self, two_chain_active):
        text = engine.canonical_dumps(two_chain_active)
        assert text.index('"chains"') < text.index('"locks"')
        assert text.endswith("\n")
