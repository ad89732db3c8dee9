"""Echo visibility of the broadband reference pulse across its band.

Sweeps sigma_y retention at selected echo numbers over a fine offset
grid at nominal RF, the standard picture for judging how flat a
refocusing pulse is across its optimization range.
"""

import argparse

import numpy as np

from ocpulse import echo_train, fileio

KHZ = 2.0 * np.pi * 1e3


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--waveform", default=None, help="JSON path; default packaged broadband pulse")
    ap.add_argument("--half-bandwidth-khz", type=float, default=10.0)
    ap.add_argument("--points", type=int, default=401)
    ap.add_argument("--echoes", default="1,2,500")
    ap.add_argument("--tau", type=float, default=1e-3)
    ap.add_argument("--out", default="echo_visibility.csv")
    args = ap.parse_args()

    w = (fileio.load_waveform_json(args.waveform) if args.waveform
         else fileio.reference_waveform("oct_broadband"))
    echoes = tuple(int(s) for s in args.echoes.split(","))
    offsets = np.linspace(-args.half_bandwidth_khz * KHZ,
                          args.half_bandwidth_khz * KHZ, args.points)
    sweep = echo_train.echo_visibility_sweep(w, args.tau, offsets, (1.0,), echoes)

    retained = sweep.retained.reshape(args.points, len(echoes))
    with open(args.out, "w") as fh:
        fh.write("offset_khz," + ",".join(f"echo_{k}" for k in echoes) + "\n")
        for off, row in zip(offsets, retained):
            fh.write(f"{off / KHZ:.4f}," + ",".join(f"{v:.6f}" for v in row) + "\n")
    for j, k in enumerate(echoes):
        print(f"echo {k}: min {retained[:, j].min():.4f} "
              f"mean {retained[:, j].mean():.4f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
