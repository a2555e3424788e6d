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

"""Freezes pystoi reference values for 50 noisy speech-like pairs at 10 kHz.

Usage: python3 gen_stoi_fixtures.py ../data/stoi_pystoi.csv
Generated with pystoi 0.4.1.
"""

import sys

import pystoi

from signals import add_noise_at_snr, speech_like, uniform_noise

RATE = 10000
N = 3 * RATE
SNRS = [-10.0, -5.0, 0.0, 5.0, 10.0]


def main(out):
    with open(out, "w") as f:
        f.write("pair,speech_seed,noise_seed,snr_db,stoi\n")
        for i in range(50):
            s = speech_like(1000 + i, N, RATE)
            n = uniform_noise(5000 + i, N)
            snr = SNRS[i % len(SNRS)]
            y = add_noise_at_snr(s, n, snr)
            v = pystoi.stoi(s, y, RATE, extended=False)
            f.write(f"{i},{1000 + i},{5000 + i},{snr:g},{v:.12f}\n")


if __name__ == "__main__":
    main(sys.argv[1])
