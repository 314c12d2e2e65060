"""Independent straight-line re-simulation of the golden trajectory.

Recomputes the committed golden CSV (d=2, k=2, T=100, inner-product,
uniform disk, master seed 1, trial 0, checkpoints 1/3/10/32/100) from
nothing but this file: its own SplitMix64, its own Box-Muller sampler,
its own Kahan accumulation.  No imports from the package under test.

Run:  python3 tests/oracles/golden_resim.py > /tmp/golden_resim.csv
then byte-compare against src/vecbal/data/golden_trajectory.csv.
"""

import math

MASK = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
TWO53_INV = 2.0**-53
TWO_PI = 2.0 * math.pi


def mix64(z):
    z &= MASK
    z = ((z ^ (z >> 30)) * MIX1) & MASK
    z = ((z ^ (z >> 27)) * MIX2) & MASK
    return z ^ (z >> 31)


def trial_seed(master, index):
    return mix64((master & MASK) ^ ((GOLDEN * (index + 1)) & MASK))


class Rng:
    def __init__(self, seed):
        self.seed = seed & MASK
        self.n = 0

    def u64(self):
        self.n += 1
        return mix64((self.seed + self.n * GOLDEN) & MASK)

    def f64(self):
        return (self.u64() >> 11) * TWO53_INV

    def open01(self):
        return ((self.u64() >> 11) + 1) * TWO53_INV


def sample_disk(rng):
    # one Box-Muller pair, then radial rescale to uniform on the unit disk
    u1 = rng.open01()
    u2 = rng.f64()
    r = math.sqrt(-2.0 * math.log(u1))
    a = TWO_PI * u2
    z0 = r * math.cos(a)
    z1 = r * math.sin(a)
    ss = 0.0
    ss += z0 * z0
    ss += z1 * z1
    nrm = math.sqrt(ss)
    u = rng.f64()
    rad = u ** (1.0 / 2)
    if nrm == 0.0:
        return [0.0, 0.0]
    scale = rad / nrm
    return [z0 * scale, z1 * scale]


def main():
    k, d, horizon = 2, 2, 100
    checkpoints = [1, 3, 10, 32, 100]
    seed = trial_seed(1, 0)
    rng = Rng(seed)

    sums = [[0.0] * d for _ in range(k)]
    comp = [[0.0] * d for _ in range(k)]
    d_running = 0.0
    rows = []

    for n in range(1, horizon + 1):
        v = sample_disk(rng)

        # inner-product rule: argmin <v, B_i>, lowest index wins ties
        best_ip = 0.0
        for l in range(d):
            best_ip += v[l] * sums[0][l]
        h = 0
        for i in range(1, k):
            ip = 0.0
            for l in range(d):
                ip += v[l] * sums[i][l]
            if ip < best_ip:
                best_ip = ip
                h = i

        for l in range(d):
            y = v[l] - comp[h][l]
            t = sums[h][l] + y
            comp[h][l] = (t - sums[h][l]) - y
            sums[h][l] = t

        pair_sq = 0.0
        for l in range(d):
            dl = sums[0][l] - sums[1][l]
            pair_sq += dl * dl
        cur = math.sqrt(pair_sq)
        if cur > d_running:
            d_running = cur

        if n in checkpoints:
            s_now = pair_sq  # k=2: the only pair
            merged = cur  # k=2: first half vs second half is the same pair
            rows.append((n, d_running, s_now, cur, merged))

    lines = ["trial_index,seed,n,D,S,max_pair,merged_imb"]
    for n, dd, ss, cur, merged in rows:
        lines.append(
            f"0,{seed},{n},{dd!r},{ss!r},{cur!r},{merged!r}"
        )
    print("\n".join(lines))


if __name__ == "__main__":
    main()
