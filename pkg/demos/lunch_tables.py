"""Four colleagues rotate lunch company without ever agreeing on it.

Each player mixes evenly over the three structures that pair them with
one colleague while the other two eat alone. The script verifies the
profile exactly, shows the resulting lottery over realized partitions,
and checks how far the arrangement survives larger coalition caps.
"""

from fractions import Fraction

from coalition_forge import (
    Coalition,
    MixedProfile,
    build_game,
    classify_stochastic,
    equilibrium_partitions,
    is_complete_cooperation,
    stability_K_star,
    verify_epsilon_nash,
)
from coalition_forge.solver import EquilibriumResult

NAMES = ("A", "B", "C", "D")


def rotation_profile(game):
    rows = []
    for player in range(4):
        row = [Fraction(0)] * len(game.strategy_sets[player])
        for index, strategy in enumerate(game.strategy_sets[player]):
            structure = game.family[strategy.desired_partition]
            pairs = sum(1 for b in structure.blocks if b.size == 2)
            if (
                structure.block_of(player).size == 2
                and structure.max_block_size == 2
                and pairs == 1
            ):
                row[index] = Fraction(1, 3)
        rows.append(tuple(row))
    return MixedProfile(tuple(rows))


def as_result(game, mixed):
    report = verify_epsilon_nash(game, mixed)
    return EquilibriumResult(
        profile=mixed,
        expected_payoffs=report.expected,
        max_regret=report.max_regret,
        method="supplied",
        is_equilibrium=report.passed,
    )


def blocks_text(structure):
    return "{" + ",".join(
        "{" + ",".join(NAMES[m] for m in block) + "}" for block in structure.blocks
    ) + "}"


def main():
    game = build_game("lunch")
    mixed = rotation_profile(game)
    report = verify_epsilon_nash(game, mixed)
    print(f"verified: {report.passed}, max regret {report.max_regret}")
    value = report.expected[0]
    print(f"everyone expects {value} (about {float(value):.3f})")

    result = as_result(game, mixed)
    print()
    print("lottery over realized partitions:")
    dist = equilibrium_partitions(game, result)
    for structure in dist.partitions:
        print(f"  {blocks_text(structure):<24} {dist.probability(structure)}")
    print(f"stochastic structure: {classify_stochastic(game, result)}")

    coop = is_complete_cooperation(game, result, Coalition.of(0, 1))
    print()
    print(
        "A and B cooperate completely: "
        f"{coop.complete} (they pair with probability 8/81 only)"
    )

    print()
    base = game.restrict(2)
    family = [base, game.restrict(3), game]
    lifted = as_result(base, rotation_profile(base))
    stability = stability_K_star(family, 2, lifted)
    print(f"largest cap the rotation survives: K* = {stability.K_star}")
    for check in stability.per_K_checks:
        print(
            f"  K={check.K}: payoffs ok {check.payoff_ok}, domains ok {check.domain_ok}"
        )


if __name__ == "__main__":
    main()
