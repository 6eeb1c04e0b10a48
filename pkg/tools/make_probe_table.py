"""Generate the benchmark probe table with an independent scalar calculator.

Values are computed with mpmath at 50 significant digits using plain Python
loops, so nothing here shares code with the numpy implementations under test.
Run once; the output is committed to tests/data/probe_table.json.
"""

import json
import pathlib

import mpmath as mp

mp.mp.dps = 50


def sphere(x):
    return mp.fsum(mp.mpf(v) ** 2 for v in x)


def rosenbrock(x):
    x = [mp.mpf(v) for v in x]
    return mp.fsum(100 * (x[i + 1] - x[i] ** 2) ** 2 + (1 - x[i]) ** 2 for i in range(len(x) - 1))


def rastrigin(x):
    x = [mp.mpf(v) for v in x]
    return 10 * len(x) + mp.fsum(v ** 2 - 10 * mp.cos(2 * mp.pi * v) for v in x)


def ackley(x):
    x = [mp.mpf(v) for v in x]
    n = len(x)
    s1 = mp.fsum(v ** 2 for v in x) / n
    s2 = mp.fsum(mp.cos(2 * mp.pi * v) for v in x) / n
    return -20 * mp.exp(-mp.mpf("0.2") * mp.sqrt(s1)) - mp.exp(s2) + 20 + mp.e


def griewank(x):
    x = [mp.mpf(v) for v in x]
    s = mp.fsum(v ** 2 for v in x) / 4000
    p = mp.mpf(1)
    for i, v in enumerate(x, start=1):
        p *= mp.cos(v / mp.sqrt(i))
    return 1 + s - p


FUNCS = {
    "sphere": sphere,
    "rosenbrock": rosenbrock,
    "rastrigin": rastrigin,
    "ackley": ackley,
    "griewank": griewank,
}

# Fixed probes; the last row of each list is the known optimum.
PROBES = {
    2: [
        [0.5, -1.25],
        [1.0, 2.0],
        [-3.3, 0.7],
        [2.0, 2.0],
        [-0.1, 4.4],
    ],
    5: [
        [0.5, -1.25, 2.0, 0.0, 3.5],
        [1.0, 1.0, 1.0, 1.0, 0.9],
        [-2.2, 0.3, 1.7, -4.1, 0.05],
        [3.0, -3.0, 3.0, -3.0, 3.0],
        [0.01, 0.02, -0.03, 0.04, -0.05],
    ],
}


def optimum(name, dim):
    return [1.0] * dim if name == "rosenbrock" else [0.0] * dim


def main():
    rows = []
    for dim, probes in PROBES.items():
        for name, f in FUNCS.items():
            for x in probes + [optimum(name, dim)]:
                rows.append({"problem": name, "dim": dim, "x": x, "value": float(f(x))})
    out = pathlib.Path(__file__).resolve().parents[1] / "tests" / "data" / "probe_table.json"
    out.write_text(json.dumps(rows, indent=1) + "\n")
    print(f"wrote {len(rows)} rows to {out}")


if __name__ == "__main__":
    main()
