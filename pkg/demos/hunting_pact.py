"""Two hunters, a safe hare and a stag that needs a real pact.

With singletons only, hunting hare is the solid outcome. Allowing a
pact keeps the old equilibrium alive but creates a new one that pays
far better, which the stability scan surfaces as a diagnostic rather
than a failure.
"""

from coalition_forge import (
    build_game,
    first_pure_equilibrium,
    pure_nash_enumerate,
    stability_K_star,
)


def main():
    game = build_game("stag-hare")
    solo = game.restrict(1)

    def line(current, result, note=""):
        profile = tuple(result.profile.support(i)[0] for i in range(2))
        actions = "/".join(
            current.strategy_sets[i][profile[i]].action for i in range(2)
        )
        pays = ", ".join(str(v) for v in result.expected_payoffs)
        print(f"  {actions:<11} pays ({pays}){note}")

    print("== singletons only")
    for result in pure_nash_enumerate(solo):
        line(solo, result)

    print()
    print("== pacts allowed")
    for result in pure_nash_enumerate(game):
        profile = tuple(result.profile.support(i)[0] for i in range(2))
        paired = game.realized_partition(profile).max_block_size == 2
        line(game, result, " (realized pact)" if paired else "")

    print()
    base = first_pure_equilibrium(solo)
    report = stability_K_star([solo, game], 1, base)
    print(f"hare hunting survives up to K* = {report.K_star}")
    for diagnostic in report.diagnostics:
        pays = ", ".join(str(v) for v in diagnostic.payoffs)
        print(
            f"  note at K={diagnostic.K}: an equilibrium paying "
            f"({pays}) dominates the lifted one"
        )
    print("the old equilibrium is still an equilibrium, it is just no")
    print("longer the one anyone would want to coordinate on.")


if __name__ == "__main__":
    main()
