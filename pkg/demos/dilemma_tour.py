"""Tour of the dilemma variants and how pairing changes the outcome.

Four games share one payoff core. Letting players ask for a pair adds
strategies without changing any payoff, a pair bonus makes the paired
defection the unique equilibrium, a solitude bonus does the opposite,
and mixing one type of each yields an equilibrium in mixed strategies.
"""

from fractions import Fraction

from coalition_forge import (
    MixedProfile,
    build_game,
    pure_nash_enumerate,
    verify_epsilon_nash,
)


def label(game, player, index):
    strategy = game.strategy_sets[player][index]
    where = "t" if game.family[strategy.desired_partition].max_block_size == 2 else "a"
    return f"{strategy.action}_{where}"


def show_pure(game_id, **params):
    game = build_game(game_id, **params)
    results = pure_nash_enumerate(game)
    shown = ", ".join(
        "("
        + ",".join(label(game, i, r.profile.support(i)[0]) for i in range(2))
        + ")"
        for r in results
    )
    pays = sorted({tuple(str(v) for v in r.expected_payoffs) for r in results})
    rendered = ", ".join("(" + ",".join(p) + ")" for p in pays)
    word = "equilibrium" if len(results) == 1 else "equilibria"
    print(f"{game_id}: {len(results)} pure {word}: {shown}  payoffs {rendered}")


def main():
    print("== pure equilibria across the variants")
    show_pure("pd-standard")
    show_pure("pd-extended")
    show_pure("pd-extroverts", eps=Fraction(1))
    show_pure("pd-introverts", delta=Fraction(1))

    print()
    print("== one extrovert facing one introvert")
    game = build_game("pd-mixed", eps=Fraction(1), delta=Fraction(1))
    half = Fraction(1, 2)
    mixed = MixedProfile(
        (
            (Fraction(0), half, Fraction(0), half),
            (Fraction(0), Fraction(1), Fraction(0), Fraction(0)),
        )
    )
    report = verify_epsilon_nash(game, mixed)
    pays = ", ".join(str(v) for v in report.expected)
    print("row player splits evenly between defecting alone and defecting")
    print("while asking for the pair; the column player defects alone.")
    print(f"expected payoffs ({pays}), max regret {report.max_regret}")
    print("the pair never actually forms: the column player never consents.")


if __name__ == "__main__":
    main()
