"""Normal-form games whose strategies carry a desired coalition structure.

A strategy is a (desired partition, action) pair. A mechanism maps every
profile of desires to one realized coalition structure, which splits the
profile space into disjoint domains, one per reachable structure. Payoffs
are exact rationals keyed by the full strategy profile.

Profiles are plain tuples of per-player strategy indices, ordered by
player. The index tuples double as table keys and as the lexicographic
iteration order used everywhere deterministic output is promised.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .partitions import Coalition, CoalitionStructure, PartitionFamily, enumerate_partitions

Profile = tuple[int, ...]

UNANIMITY = "unanimity"
TABLE = "table"


class ValidationError(ValueError):
    """A game, file, or profile failed a structural consistency check."""


@dataclass(frozen=True)
class Strategy:
    """A desired partition (index into the game's family) plus an action label.

    Games without intra-coalition moves use an empty action string.
    """

    desired_partition: int
    action: str = ""


@dataclass(frozen=True)
class Mechanism:
    """Rule taking a full strategy profile to the realized structure.

    kind "unanimity": a multi-player coalition forms exactly when every one
    of its members desires a partition containing it as a block; everyone
    not covered by such a coalition stays a singleton. kind "table": an
    explicit total map from profile to structure.
    """

    kind: str = UNANIMITY
    table: Mapping[Profile, CoalitionStructure] | None = None

    def __post_init__(self):
        if self.kind not in (UNANIMITY, TABLE):
            raise ValueError(f"unknown mechanism kind {self.kind!r}")
        if self.kind == TABLE and self.table is None:
            raise ValueError("table mechanism needs an explicit profile map")
        if self.kind == UNANIMITY and self.table is not None:
            raise ValueError("unanimity mechanism takes no table")


@dataclass(frozen=True)
class DomainDecomposition:
    """Profiles grouped by their realized structure.

    Domains are disjoint and jointly cover the whole profile space; the
    mapping preserves family order and lexicographic profile order.
    """

    domains: Mapping[CoalitionStructure, tuple[Profile, ...]]

    def __iter__(self):
        return iter(self.domains.items())

    def __len__(self) -> int:
        return len(self.domains)

    def profile_count(self) -> int:
        return sum(len(v) for v in self.domains.values())


@dataclass(frozen=True, eq=False)
class CoalitionGame:
    """A finite game over partition-aware strategies.

    Attributes:
        n_players: number of players, indexed 0..n-1.
        max_coalition: block size cap K of the partition family.
        family: all structures the players may desire.
        strategy_sets: per player, an ordered tuple of strategies.
        mechanism: how desires turn into one realized structure.
        payoffs: total map from profile (tuple of strategy indices, one per
            player) to a tuple of exact rational payoffs.
    """

    n_players: int
    max_coalition: int
    family: PartitionFamily
    strategy_sets: tuple[tuple[Strategy, ...], ...]
    mechanism: Mechanism = field(default_factory=Mechanism)
    payoffs: Mapping[Profile, tuple[Fraction, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_players < 1:
            raise ValidationError("need at least one player")
        if not 1 <= self.max_coalition <= self.n_players:
            raise ValidationError(
                f"coalition cap must satisfy 1 <= K <= n, got {self.max_coalition}"
            )
        if self.family.n_players != self.n_players or self.family.max_block != self.max_coalition:
            raise ValidationError("partition family does not match the game dimensions")
        if len(self.strategy_sets) != self.n_players:
            raise ValidationError("one strategy set per player required")
        for i, strategies in enumerate(self.strategy_sets):
            if not strategies:
                raise ValidationError(f"player {i} has an empty strategy set")
            if len(set(strategies)) != len(strategies):
                raise ValidationError(f"player {i} has duplicate strategies")
            for s in strategies:
                if not 0 <= s.desired_partition < len(self.family):
                    raise ValidationError(
                        f"player {i} desires partition index {s.desired_partition}, "
                        f"family has {len(self.family)}"
                    )

    # -- basic accessors -------------------------------------------------

    def strategies_of(self, player: int) -> tuple[Strategy, ...]:
        return self.strategy_sets[player]

    def profiles(self):
        """All profiles in lexicographic order of strategy indices."""
        return itertools.product(*(range(len(s)) for s in self.strategy_sets))

    @property
    def n_profiles(self) -> int:
        out = 1
        for s in self.strategy_sets:
            out *= len(s)
        return out

    def desired_structure(self, player: int, strategy_index: int) -> CoalitionStructure:
        return self.family[self.strategy_sets[player][strategy_index].desired_partition]

    def strategy_key(self, player: int, strategy_index: int) -> tuple[CoalitionStructure, str]:
        """Identity of a strategy independent of family indexing.

        Used to match strategies across nested games, where the same
        desired structure sits at different family indices.
        """
        s = self.strategy_sets[player][strategy_index]
        return self.family[s.desired_partition], s.action

    def _check_profile(self, profile: Profile) -> None:
        if len(profile) != self.n_players:
            raise ValueError(f"profile {profile} has {len(profile)} entries, expected {self.n_players}")
        for i, idx in enumerate(profile):
            if not 0 <= idx < len(self.strategy_sets[i]):
                raise ValueError(f"profile {profile}: index {idx} out of range for player {i}")

    # -- mechanism and payoffs -------------------------------------------

    def realized_partition(self, profile: Profile) -> CoalitionStructure:
        """The structure the mechanism produces for a pure profile."""
        self._check_profile(profile)
        if self.mechanism.kind == TABLE:
            try:
                return self.mechanism.table[tuple(profile)]
            except KeyError:
                raise ValidationError(f"mechanism table has no entry for profile {profile}") from None
        desired = [self.desired_structure(i, profile[i]) for i in range(self.n_players)]
        formed: list[Coalition] = []
        taken: set[int] = set()
        for i in range(self.n_players):
            if i in taken:
                continue
            block = desired[i].block_of(i)
            if block.size >= 2 and all(desired[j].block_of(j) == block for j in block):
                formed.append(block)
                taken.update(block.members)
        for i in range(self.n_players):
            if i not in taken:
                formed.append(Coalition.of(i))
        return CoalitionStructure(tuple(formed), self.n_players)

    def payoff(self, profile: Profile) -> tuple[Fraction, ...]:
        self._check_profile(profile)
        try:
            return self.payoffs[tuple(profile)]
        except KeyError:
            raise ValidationError(f"payoff table has no entry for profile {profile}") from None

    def coalition_value(self, profile: Profile, coalition: Coalition) -> Fraction:
        """Sum of members' payoffs at a profile, if the coalition is realized there."""
        structure = self.realized_partition(profile)
        if not structure.contains_block(coalition):
            raise ValueError(
                f"coalition {coalition} is not a block of the realized structure {structure}"
            )
        pay = self.payoff(profile)
        return sum((pay[m] for m in coalition), Fraction(0))

    # -- validation and restriction --------------------------------------

    def validate_domains(self) -> DomainDecomposition:
        """Check mechanism totality and payoff totality, returning the domains.

        Every profile must map to a structure inside the family and carry a
        payoff entry. Grouping a total function cannot overlap, so the
        decomposition is disjoint and covering by construction; profile
        counts are still rechecked.
        """
        members = set(self.family.structures)
        domains: dict[CoalitionStructure, list[Profile]] = {}
        for profile in self.profiles():
            structure = self.realized_partition(profile)
            if structure not in members:
                raise ValidationError(
                    f"profile {profile} realizes {structure}, outside the family cap {self.max_coalition}"
                )
            if profile not in self.payoffs:
                raise ValidationError(f"payoff table has no entry for profile {profile}")
            if len(self.payoffs[profile]) != self.n_players:
                raise ValidationError(f"payoff entry for {profile} has the wrong arity")
            domains.setdefault(structure, []).append(profile)
        ordered = {
            s: tuple(domains[s]) for s in self.family.structures if s in domains
        }
        decomposition = DomainDecomposition(ordered)
        if decomposition.profile_count() != self.n_profiles:
            raise AssertionError("domain decomposition lost profiles")
        return decomposition

    def restrict(self, max_coalition: int) -> CoalitionGame:
        """The nested game with desires capped at a smaller block size.

        Keeps, per player and in the original order, exactly the strategies
        whose desired structure survives the cap, and copies payoffs from
        the corresponding parent profiles. The restricted game is validated
        before being returned.
        """
        if not 1 <= max_coalition <= self.max_coalition:
            raise ValueError(
                f"restriction cap must satisfy 1 <= K <= {self.max_coalition}, got {max_coalition}"
            )
        if max_coalition == self.max_coalition:
            return self
        sub_family = enumerate_partitions(self.n_players, max_coalition)
        allowed = set(sub_family.structures)
        kept: list[list[int]] = []
        new_sets: list[tuple[Strategy, ...]] = []
        for i in range(self.n_players):
            rows = [
                idx
                for idx in range(len(self.strategy_sets[i]))
                if self.desired_structure(i, idx) in allowed
            ]
            if not rows:
                raise ValidationError(
                    f"player {i} has no strategy left under cap {max_coalition}"
                )
            kept.append(rows)
            new_sets.append(
                tuple(
                    Strategy(
                        sub_family.index_of(self.desired_structure(i, idx)),
                        self.strategy_sets[i][idx].action,
                    )
                    for idx in rows
                )
            )
        new_payoffs: dict[Profile, tuple[Fraction, ...]] = {}
        new_table: dict[Profile, CoalitionStructure] = {}
        for new_profile in itertools.product(*(range(len(r)) for r in kept)):
            parent = tuple(kept[i][new_profile[i]] for i in range(self.n_players))
            new_payoffs[new_profile] = self.payoff(parent)
            if self.mechanism.kind == TABLE:
                new_table[new_profile] = self.realized_partition(parent)
        mechanism = (
            Mechanism()
            if self.mechanism.kind == UNANIMITY
            else Mechanism(TABLE, new_table)
        )
        game = CoalitionGame(
            n_players=self.n_players,
            max_coalition=max_coalition,
            family=sub_family,
            strategy_sets=tuple(new_sets),
            mechanism=mechanism,
            payoffs=new_payoffs,
        )
        game.validate_domains()
        return game


def payoff_isomorphic(a: CoalitionGame, b: CoalitionGame) -> bool:
    """Whether two games agree up to strategy identity.

    Same players, same per-player sequences of (desired structure, action)
    pairs, and pointwise equal payoffs. Family indices may differ, which is
    exactly what happens between a game and a rebuilt restriction of it.
    """
    if a.n_players != b.n_players or a.max_coalition != b.max_coalition:
        return False
    for i in range(a.n_players):
        keys_a = [a.strategy_key(i, j) for j in range(len(a.strategy_sets[i]))]
        keys_b = [b.strategy_key(i, j) for j in range(len(b.strategy_sets[i]))]
        if keys_a != keys_b:
            return False
    return all(a.payoff(p) == b.payoff(p) for p in a.profiles())


def restrict_game(game: CoalitionGame, max_coalition: int) -> CoalitionGame:
    """Functional form of CoalitionGame.restrict."""
    return game.restrict(max_coalition)
