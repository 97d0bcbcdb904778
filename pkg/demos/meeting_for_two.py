"""Partner coordination with a small reward for actually pairing up.

Support enumeration finds every equilibrium of the two player game
exactly. The interesting one mixes inside the together block, and its
weights do not move when the pairing reward changes.
"""

from fractions import Fraction

from coalition_forge import SolverConfig, build_game, mixed_nash_2p_support_enum


def describe(game, result):
    names = ("Ann", "Bob")
    parts = []
    for i in range(2):
        weights = result.profile.weights[i]
        terms = []
        for j in result.profile.support(i):
            strategy = game.strategy_sets[i][j]
            where = "t" if game.family[strategy.desired_partition].max_block_size == 2 else "a"
            terms.append(f"{weights[j]} {strategy.action}_{where}")
        parts.append(f"{names[i]}: " + " + ".join(terms))
    pays = ", ".join(str(v) for v in result.expected_payoffs)
    return " | ".join(parts) + f"  -> ({pays})"


def main():
    config = SolverConfig()
    for eps in (Fraction(0), Fraction(1, 10), Fraction(1)):
        game = build_game("bos", eps=eps)
        found = mixed_nash_2p_support_enum(game, config)
        listing = found.equilibria
        print(f"== eps = {eps}: {len(listing)} equilibria")
        if eps == 0:
            degenerate = sum(1 for r in listing if r.degenerate)
            print(f"  (eps=0 duplicates the blocks, {degenerate} are degenerate;")
            print("  showing only the mixtures with a two strategy support)")
            listing = [
                r
                for r in listing
                if not r.profile.is_pure and not r.degenerate
            ]
        for result in listing:
            flag = " (degenerate)" if result.degenerate else ""
            print("  " + describe(game, result) + flag)
        print()
    print("the together-block mixture stays at weights 2/3 and 1/3 for")
    print("every eps: the reward shifts both payoffs equally inside the")
    print("block, so the indifference system never changes.")


if __name__ == "__main__":
    main()
