"""Decision under uncertainty: Wald, Hurwicz, and Savage side by side.

The payoff matrix is an insurer choosing a premium level without knowing
the coming year's loss level. Rows are actions, columns are states;
+1 is a good year, -1 a bad one.

Run with: python3 demos/demo_decision_criteria.py
"""

from complykit import PayoffMatrix, hurwicz, savage, wald

MATRIX = PayoffMatrix(
    actions=["High", "Average", "Short"],
    states=["High losses", "Average losses", "Low losses"],
    values=[[1, 1, 1],
            [-1, 1, 1],
            [-1, -1, 1]],
)


def show(choice):
    print(f"  scores: {list(choice.scores)}")
    if choice.regret_matrix is not None:
        print("  regret matrix:")
        for label, row in zip(MATRIX.actions, choice.regret_matrix):
            print(f"    {label:8s} {list(row)}")
    print(f"  -> {choice.action_label} (value {choice.value})\n")


def main():
    print("payoffs:")
    for label, row in zip(MATRIX.actions, MATRIX.values):
        print(f"  {label:8s} {list(row)}")
    print()

    print("Wald (maximin): best worst case")
    show(wald(MATRIX))

    print("Savage (minimax regret): smallest worst-case regret")
    show(savage(MATRIX))

    for lam in (0.0, 0.5, 1.0):
        print(f"Hurwicz (lambda={lam}): "
              f"{lam} * best case + {1 - lam} * worst case")
        show(hurwicz(MATRIX, lam))

    # lambda = 0 is pure pessimism: identical to Wald.
    assert hurwicz(MATRIX, 0.0).action_index == wald(MATRIX).action_index


if __name__ == "__main__":
    main()
