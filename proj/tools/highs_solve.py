#!/usr/bin/env python3
"""External solver adapter: highs_solve.py MODEL.lp SOLUTION.txt

Solves the LP-format model with HiGHS and writes "name value" lines, or the
single word "infeasible" (or "timeout").
"""
import sys

import highspy


def main() -> int:
    if len(sys.argv) != 3:
        print("usage: highs_solve.py MODEL.lp SOLUTION.txt", file=sys.stderr)
        return 2
    model_path, out_path = sys.argv[1], sys.argv[2]
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("threads", 1)
    h.setOptionValue("random_seed", 0)
    if h.readModel(model_path) == highspy.HighsStatus.kError:
        print(f"cannot read {model_path}", file=sys.stderr)
        return 1
    h.run()
    status = h.getModelStatus()
    with open(out_path, "w") as out:
        if status == highspy.HighsModelStatus.kInfeasible:
            out.write("infeasible\n")
            return 0
        if status != highspy.HighsModelStatus.kOptimal:
            out.write("timeout\n")
            return 0
        values = h.getSolution().col_value
        lp = h.getLp()
        for name, value in zip(lp.col_names_, values):
            out.write(f"{name} {int(round(value))}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
