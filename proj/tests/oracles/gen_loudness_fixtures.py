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

"""Integrated loudness of deterministic test signals via pyloudnorm.

Writes tests/data/loudness_pyloudnorm.csv. Rerun only to refresh the frozen
values: python3 gen_loudness_fixtures.py
"""

import csv
import os

import numpy as np
import pyloudnorm

from signals import SplitMix64, add_noise_at_snr, speech_like, uniform_noise

RATES = [16000, 44100, 48000]
OUT = os.path.join(os.path.dirname(__file__), "..", "data", "loudness_pyloudnorm.csv")


def main():
    rows = []
    for i in range(30):
        rate = RATES[i % len(RATES)]
        g = SplitMix64(9000 + i)
        # Whole number of 100 ms hops after the first 400 ms block, so the
        # block count does not depend on rounding the trailing partial block.
        hops = 16 + int(40 * g.uniform())
        gain = 10.0 ** ((-30.0 + 28.0 * g.uniform()) / 20.0)
        snr = -5.0 + 30.0 * g.uniform()
        n = rate * 4 // 10 + hops * (rate // 10)
        x = add_noise_at_snr(speech_like(3000 + i, n, rate), uniform_noise(7000 + i, n), snr)
        x = gain * x / np.max(np.abs(x))
        # "DeMan" re-derives the tabulated 48 kHz K-weighting at any rate; the
        # default class is a coarser RBJ approximation.
        meter = pyloudnorm.Meter(rate, filter_class="DeMan")
        rows.append((i, rate, n, 3000 + i, 7000 + i, repr(float(snr)), repr(float(gain)),
                     repr(float(meter.integrated_loudness(x)))))
    with open(OUT, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["case", "rate", "samples", "speech_seed", "noise_seed", "snr_db", "peak",
                    "lufs"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
