"""Command-line front end: ``gcipher keygen|encrypt|decrypt|check-key|demo|census``."""

from __future__ import annotations

import argparse
import sys

from . import demo
from .algebra import MAX_CELLS, NotInvertible
from .cipher import SymbolError, decrypt, encrypt
from .keyforge import (
    KeyFileError,
    census,
    fingerprint,
    generate_key,
    parse_key,
    serialize_key,
)


class CliError(Exception):
    pass


def _read(path):
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write(path, data):
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    with open(path, "wb") as fh:
        fh.write(data)


def decode_symbols(data: bytes, q: int) -> list:
    """Whitespace-separated decimal symbols, each below ``q``."""
    symbols = []
    for pos, token in enumerate(data.split()):
        if not token.isdigit():
            raise CliError(f"symbol {pos}: {token.decode('ascii', 'replace')!r} is not a decimal integer")
        symbols.append(int(token))
    for pos, x in enumerate(symbols):
        if x >= q:
            raise CliError(f"symbol {pos}: {x} is outside 0..{q - 1}")
    return symbols


def encode_symbols(symbols) -> bytes:
    if not symbols:
        return b""
    return (" ".join(map(str, symbols)) + "\n").encode("ascii")


def _load_key(path):
    return parse_key(_read(path))


def cmd_keygen(args):
    key = generate_key(args.n, args.q, args.seed, args.schedule_length)
    _write(args.out, serialize_key(key))
    print(fingerprint(key))


def cmd_check_key(args):
    key = _load_key(args.key)
    print(
        f"ok n={key.n} q={key.q} i={key.n} leaders={len(key.leaders)} "
        f"exponents={len(key.exponents)} fingerprint={fingerprint(key)}"
    )


def _crypt(args, func):
    key = _load_key(args.key)
    data = _read(args.in_path)
    if args.mode == "bytes":
        if key.q != 256:
            raise CliError(f"bytes mode needs a key with q = 256, this key has q = {key.q}")
        _write(args.out, func(key, data))
    else:
        _write(args.out, encode_symbols(func(key, decode_symbols(data, key.q))))


def cmd_encrypt(args):
    _crypt(args, encrypt)


def cmd_decrypt(args):
    _crypt(args, decrypt)


def cmd_demo(args):
    sys.stdout.write(demo.transcript())


def cmd_census(args):
    mode = args.mode
    try:
        report = census(args.n, args.q, args.place, mode)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    print(report.line())


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="gcipher", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a random key file")
    p.add_argument("--n", type=int, required=True, help="arity, >= 2")
    p.add_argument("--q", type=int, required=True, help="alphabet size, >= 2")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--schedule-length", type=_positive, default=2)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("check-key", help="validate a key file")
    p.add_argument("--key", required=True)
    p.set_defaults(func=cmd_check_key)

    for name, func in (("encrypt", cmd_encrypt), ("decrypt", cmd_decrypt)):
        p = sub.add_parser(name, help=f"{name} a file")
        p.add_argument("--key", required=True)
        p.add_argument("--in", dest="in_path", required=True, help="input path or -")
        p.add_argument("--out", required=True, help="output path or -")
        p.add_argument("--mode", choices=("symbols", "bytes"), default="symbols")
        p.set_defaults(func=func)

    p = sub.add_parser("demo", help="print the ternary worked example")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("census", help="count invertible groupoids and quasigroups")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--place", type=int, required=True)
    p.add_argument("--mode", choices=("auto", "exhaustive", "closed-form"), default="auto")
    p.set_defaults(func=cmd_census)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "keygen":
        if args.n < 2:
            parser.error(f"--n must be >= 2, got {args.n}")
        if args.q < 2:
            parser.error(f"--q must be >= 2, got {args.q}")
        if args.q**args.n > MAX_CELLS:
            parser.error(f"q^n = {args.q}^{args.n} exceeds the cap of {MAX_CELLS} cells")
        if args.seed < 0:
            parser.error("--seed must be non-negative")
    if args.command == "census":
        if args.n < 2 or args.q < 1:
            parser.error("census needs n >= 2 and q >= 1")
        if not 1 <= args.place <= args.n:
            parser.error(f"--place must be in 1..{args.n}")
    try:
        args.func(args)
    except (CliError, KeyFileError, NotInvertible, SymbolError, OSError) as exc:
        print(f"gcipher {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
