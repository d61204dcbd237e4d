"""Regenerate the bundled zeta-zero table with certified ball arithmetic.

Needs python-flint (build-time only; the package never imports it):

    pip install python-flint
    python tools/make_zero_table.py --count 100000 --out src/cesaro_hl/data/zeros_1e5.txt
"""
import argparse
import sys
from decimal import ROUND_HALF_EVEN, Decimal

import flint


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=100_000)
    ap.add_argument("--batch", type=int, default=1000)
    ap.add_argument("--digits", type=int, default=12)
    ap.add_argument("--out", required=True)
    args = ap.parse_args(argv)

    flint.ctx.prec = 96
    with open(args.out, "w") as fh:
        fh.write("# imaginary parts of the first %d nontrivial zeros of zeta(s)\n" % args.count)
        fh.write("# computed with arb (acb.zeta_zeros), rounded to %d decimals\n" % args.digits)
        n = 1
        while n <= args.count:
            num = min(args.batch, args.count - n + 1)
            for z in flint.acb.zeta_zeros(n, num):
                im = z.imag
                if float(im.rad()) > 10.0 ** (-args.digits - 2):
                    raise SystemExit("zero %d not certified to %d digits" % (n, args.digits))
                fh.write(_fmt(im, args.digits))
            n += num
            print(n - 1, file=sys.stderr, flush=True)


def _fmt(im, digits):
    # decimal rounding from the ball midpoint
    s = im.mid().str(digits + 10, radius=False)
    d = Decimal(s).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
    return "%s\n" % d


if __name__ == "__main__":
    main()
