#!/usr/bin/env python
"""Run every demo script, then every example through the command line."""

import runpy
import shlex
import subprocess
import sys
import tempfile
from pathlib import Path

HERE = Path(__file__).resolve().parent

CLI = [
    "netohm gen --example g1 | netohm solve --f 1,0,0",
    "netohm certify --example g1 --variant real_conductivity --bc paper",
    "netohm certify --example g2 --mu 0.5 --variant real_conductivity --bc paper",
    "netohm certify --example g2 --mu 1.0 --variant real_conductivity --bc paper",
    "netohm certify --example g2 --mu 2.0 --variant real_conductivity --bc paper",
    "netohm solve --example g3eps --eps 1e-3 --bc paper",
    "netohm jacobian --example g3eps --eps 1e-2 --variant real_conductivity --bc paper",
    "netohm jacobian --example g3eps --eps 1e-4 --variant real_conductivity --bc paper",
    *[f"netohm jacobian --example g3 --variant two_freq_conductivity --N {n}" for n in range(1, 5)],
    *[f"netohm certify --example g3 --variant two_freq_conductivity --N {n}" for n in range(1, 5)],
    "netohm certify --example g1 --variant real_schrodinger --q 1 --bc paper",
    "netohm certify --example g1 --variant two_freq_schrodinger --q 1 --q-imag 1 --bc paper",
    "netohm thermal --example figdet --mode analytic",
    "netohm thermal --example figdet --mode mc --realizations 10000 --seed 0",
    "netohm power --example grid --n 10 --variant real_conductivity --bc paper > {tmp}/grid_data.json",
    "netohm gen --example grid --n 10 --out {tmp}/grid.json",
    "netohm reconstruct --net {tmp}/grid.json --data {tmp}/grid_data.json --truth {tmp}/grid.json",
    "netohm reconstruct --net {tmp}/grid.json --data {tmp}/grid_data.json --truth {tmp}/grid.json"
    " --noise 0.05 --seed 0",
]


def main():
    for script in sorted(HERE.glob("0*.py")):
        print(f"\n===== {script.name} =====", flush=True)
        runpy.run_path(str(script), run_name="__main__")
    exe = shlex.quote(sys.executable)
    with tempfile.TemporaryDirectory() as tmp:
        for line in CLI:
            cmd = line.format(tmp=tmp).replace("netohm ", f"{exe} -m netohm ")
            print(f"\n$ {line.format(tmp='$TMP')}", flush=True)
            res = subprocess.run(cmd, shell=True, capture_output=True, text=True)
            out = res.stdout.strip().splitlines()
            print("\n".join(out[:12] + (["  ..."] if len(out) > 12 else [])))
            if res.returncode != 0:
                print(res.stderr, file=sys.stderr)
                sys.exit(res.returncode)


if __name__ == "__main__":
    main()
