# Copyright 2026 The speval Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Freezes pingouin RM-ANOVA, Mauchly and Holm post-hoc results for 8x5 matrices.

Usage: python3 gen_anova_fixtures.py ../data/rm_anova_pingouin.json
Generated with pingouin 0.6.1.
"""

import json
import sys

import numpy as np
import pandas as pd
import pingouin as pg
import scipy.stats

CONDS = ["Input", "A", "B", "C", "D"]


def matrices():
    rng = np.random.default_rng(20231)
    out = {}
    # Large condition effect, one listener much noisier: sphericity fails.
    base = np.array([1.6, 3.1, 3.4, 2.2, 3.9])
    m = base + rng.normal(0, 0.15, size=(8, 5))
    m[7] += np.array([0.0, 1.2, -0.9, 0.8, -0.6])
    out["nonspherical"] = m
    # Moderate effect with homogeneous noise.
    out["spherical"] = np.array([2.5, 2.8, 3.0, 2.9, 3.2]) + rng.normal(0, 0.4, size=(8, 5))
    # Pure noise.
    out["null"] = 3.0 + rng.normal(0, 0.5, size=(8, 5))
    return {k: np.clip(np.round(v, 4), 1.0, 5.0) for k, v in out.items()}


def analyse(m):
    rows = [(f"s{i}", CONDS[j], m[i, j]) for i in range(8) for j in range(5)]
    df = pd.DataFrame(rows, columns=["subject", "cond", "y"])
    a = pg.rm_anova(df, dv="y", within="cond", subject="subject",
                    correction=True, effsize="np2", detailed=False)
    r = a.iloc[0]
    post = pg.pairwise_tests(df, dv="y", within="cond", subject="subject",
                             padjust="holm", parametric=True)
    # pingouin orders conditions alphabetically; key pairs by name instead.
    pairs = [{"a": p["A"], "b": p["B"], "t": float(p["T"]), "dof": float(p["dof"]),
              "p_unc": float(p["p_unc"] if "p_unc" in p else p["p-unc"]),
              "p_holm": float(p["p_corr"] if "p_corr" in p else p["p-corr"])}
             for _, p in post.iterrows()]

    def g(*names):
        for n in names:
            if n in r.index:
                return float(r[n])
        raise KeyError(names)

    # First-order Box approximation of Mauchly's p (pingouin adds a
    # second-order term on top of this).
    n, d = m.shape[0], m.shape[1] - 1
    w = g("W_spher", "W-spher")
    f = 1 - (2 * d**2 + d + 2) / (6 * d * (n - 1))
    p_box = float(scipy.stats.chi2.sf(-(n - 1) * f * np.log(w), d * (d + 1) / 2 - 1))
    return {
        "conditions": CONDS,
        "p_spher_box": p_box,
        "values": m.tolist(),
        "F": g("F"),
        "ddof1": g("ddof1", "DF"),
        "ddof2": g("ddof2"),
        "p_unc": g("p_unc", "p-unc"),
        "p_gg": g("p_GG_corr", "p-GG-corr"),
        "np2": g("np2"),
        "eps": g("eps"),
        "W": g("W_spher", "W-spher"),
        "p_spher": g("p_spher", "p-spher"),
        "pairs": pairs,
    }


def main(out):
    data = {k: analyse(v) for k, v in matrices().items()}
    with open(out, "w") as f:
        json.dump(data, f, indent=1)


if __name__ == "__main__":
    main(sys.argv[1])
