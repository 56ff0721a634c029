"""The ternary worked example over Z_3, as a printable transcript."""

from itertools import product

from .algebra import Translation, affine_groupoid
from .cipher import CipherKey, decrypt, encrypt, trace

ALPHA = (2, 2, 0)
BETA = (1, 1, 1)
LEADERS = (2, 0, 2)
SCHEDULE = (1, 2)
PLAINTEXT = (2, 0, 1, 1, 2, 1)


def example_key() -> CipherKey:
    """f(x1, x2, x3) = alpha(x1) + beta(x2) + x3 mod 3, leaders 2 0 2, exponents 1 2."""
    return CipherKey(affine_groupoid([ALPHA, BETA], 3), LEADERS, SCHEDULE)


def _spaced(symbols):
    return " ".join(map(str, symbols))


def _expand(name, table, fixed, e, x):
    """Render ``name(a, b, name(a, b, x)) = name(a, b, y) = z`` for ``e`` applications."""
    head = ", ".join(map(str, fixed))
    nested = str(x)
    for _ in range(e):
        nested = f"{name}({head}, {nested})"
    parts = [nested]
    values = [x]
    for _ in range(e):
        values.append(table(*fixed, values[-1]))
    for k in range(1, e):
        inner = str(values[k])
        for _ in range(e - k):
            inner = f"{name}({head}, {inner})"
        parts.append(inner)
    parts.append(str(values[-1]))
    return " = ".join(parts)


def transcript() -> str:
    key = example_key()
    f, g = key.forward, key.inverse
    lines = [
        "ternary groupoid over Z_3: f(x1, x2, x3) = alpha(x1) + beta(x2) + x3 mod 3",
        f"alpha = ({', '.join(map(str, ALPHA))}), beta = ({', '.join(map(str, BETA))})",
        "",
        "translations T_{x1,x2} x3 = f(x1, x2, x3):",
    ]
    for a, b, x in product(range(3), repeat=3):
        lines.append(f"T_{{{a},{b}}} {x} = {f(a, b, x)}")

    lines += ["", "inverse at place 3, g(x1, x2, x4) = x3:"]
    for a, b, y in product(range(3), repeat=3):
        lines.append(f"g({a}, {b}, {y}) = {g(a, b, y)}")

    formula = all(
        g(a, b, y) == (2 * ALPHA[a] + 2 * BETA[b] + y) % 3 for a, b, y in product(range(3), repeat=3)
    )
    identities = all(
        f(a, b, g(a, b, y)) == y and g(a, b, f(a, b, y)) == y for a, b, y in product(range(3), repeat=3)
    )
    squares = all(
        tuple(Translation(g, 3, (a, b)).permutation())
        == tuple(Translation(f, 3, (a, b)).power(2, x) for x in range(3))
        for a, b in product(range(3), repeat=2)
    )
    ok = {True: "ok", False: "FAILED"}
    lines += [
        "",
        f"check g(x1, x2, x4) = 2 alpha(x1) + 2 beta(x2) + x4 mod 3: {ok[formula]}",
        f"check f(x1, x2, g(x1, x2, x4)) = x4 and g(x1, x2, f(x1, x2, x3)) = x3: {ok[identities]}",
        f"check T^-1(x, y, -) = T^2(x, y, -) for all x, y: {ok[squares]}",
        "",
        f"leaders: {_spaced(LEADERS)}",
        f"exponents: {_spaced(SCHEDULE)} (repeating)",
        f"plaintext: {_spaced(PLAINTEXT)}",
        "",
        "encryption:",
    ]
    for j, fixed, e, u, v in trace(key, PLAINTEXT):
        lines.append(f"T^{e}_{{{fixed[0]},{fixed[1]}}} {u} = {_expand('f', f, fixed, e, u)} = v_{j}")
    ciphertext = encrypt(key, list(PLAINTEXT))
    lines += [f"ciphertext: {_spaced(ciphertext)}", "", "decryption:"]
    for j, fixed, e, v, u in trace(key, ciphertext, decrypting=True):
        lines.append(f"(T^-1)^{e}_{{{fixed[0]},{fixed[1]}}} {v} = {_expand('g', g, fixed, e, v)} = u_{j}")
    lines.append(f"plaintext: {_spaced(decrypt(key, ciphertext))}")
    return "\n".join(lines) + "\n"
