#!/usr/bin/env python3
"""Second, independent reading of the two D_m displays.

Pulls the display for L^- or L^+ straight out of the source document, expands
every delta over products by the Leibniz rule, and writes the term list in the
JSON layout the C++ side loads (ncalg::expr_from_json).  Only the standard
library is used, so the reading shares no code with the C++ LaTeX parser.

    transcribe_display.py SOURCE.md --side minus -o a2_Lminus.json
"""
import argparse
import json
import re
import sys
from fractions import Fraction

OPENERS = {"minus": r"a_2\left (L^- \right)", "plus": r"a_2\left (L^+ \right)"}


def extract(text, side):
    start = text.find(OPENERS[side])
    if start < 0:
        sys.exit(f"display for side {side} not found")
    start = text.find(r"\tau \Big", start)
    end = text.find(r"\end{math}", start)
    body = text[start:end]
    body = body[body.find(r"\Big") + len(r"\Big"):]
    body = body.strip()
    if not body.startswith("("):
        sys.exit("unexpected display opening")
    close = body.rfind(r"\Big")
    return body[1:close]


TOKEN = re.compile(r"\\[A-Za-z]+|\\,|\;|[0-9]+|[A-Za-z]|[(){}^_+\-.]|\S")


def tokenize(s):
    return [t for t in TOKEN.findall(s) if t not in (r"\,", r"\;", ".")]


# A polynomial is a dict word -> complex Fraction pair (re, im).
# Letters: ("E", twist, d1, d2), ("K", exp, d1, d2), ("D", m, word).

def cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def padd(p, w, c):
    if c == (0, 0):
        return
    old = p.get(w, (Fraction(0), Fraction(0)))
    new = (old[0] + c[0], old[1] + c[1])
    if new == (0, 0):
        p.pop(w, None)
    else:
        p[w] = new


def normalize(word):
    out = []
    for x in word:
        if x[0] == "D":
            x = ("D", x[1], normalize(x[2]))
        if x[0] == "K" and x[2] == 0 and x[3] == 0 and x[1] == 0:
            continue
        if out and x[0] == "K" and out[-1][0] == "K" and x[2:] == (0, 0) and out[-1][2:] == (0, 0):
            n = out[-1][1] + x[1]
            out.pop()
            if n:
                out.append(("K", n, 0, 0))
            continue
        if out and x[0] == "E" and x[2:] == (0, 0) and out[-1] == x:
            continue
        out.append(x)
    return tuple(out)


def pmul(p, q):
    r = {}
    for wa, ca in p.items():
        for wb, cb in q.items():
            padd(r, normalize(wa + wb), cmul(ca, cb))
    return r


def one():
    return {(): (Fraction(1), Fraction(0))}


def letter(x):
    return {normalize((x,)): (Fraction(1), Fraction(0))}


def delta_letter(i, x):
    kind = x[0]
    if kind == "E":
        d = list(x)
        d[2 if i == 1 else 3] += 1
        return letter(tuple(d))
    if kind == "K":
        n = x[1]
        if x[2] or x[3] or n == 1:
            d = list(x)
            d[2 if i == 1 else 3] += 1
            return letter(tuple(d))
        dk = ("K", 1, 1 if i == 1 else 0, 1 if i == 2 else 0)
        r = {}
        if n > 1:
            for a in range(n):
                padd(r, normalize((("K", a, 0, 0), dk, ("K", n - 1 - a, 0, 0))), (Fraction(1), Fraction(0)))
        else:
            # d(k^-m) = -sum k^-(a+1) d(k) k^-(m-a)
            m = -n
            for a in range(m):
                padd(r, normalize((("K", -(a + 1), 0, 0), dk, ("K", -(m - a), 0, 0))), (Fraction(-1), Fraction(0)))
        return r
    sys.exit("derivative of a D_m node is not expected in a display")


def delta(i, p):
    r = {}
    for w, c in p.items():
        for j in range(len(w)):
            for dw, dc in delta_letter(i, w[j]).items():
                padd(r, normalize(w[:j] + dw + w[j + 1:]), cmul(c, dc))
    return r


class Reader:
    def __init__(self, toks):
        self.t = toks
        self.i = 0

    def peek(self, k=0):
        return self.t[self.i + k] if self.i + k < len(self.t) else None

    def take(self, want=None):
        tok = self.peek()
        if want is not None and tok != want:
            sys.exit(f"expected {want!r}, got {tok!r} at token {self.i}")
        self.i += 1
        return tok

    def braced(self):
        self.take("{")
        parts = []
        while self.peek() != "}":
            parts.append(self.take())
        self.take("}")
        return "".join(parts)

    def exponent(self):
        if self.peek() != "^":
            return 1
        self.take("^")
        if self.peek() == "{":
            return int(self.braced())
        return int(self.take())

    def sum(self, stop):
        total = {}
        sign = 1
        first = True
        while self.peek() not in stop:
            if self.peek() in ("+", "-"):
                sign = 1 if self.take() == "+" else -1
            elif not first:
                sys.exit(f"missing operator at token {self.i}")
            term = self.product(stop)
            for w, c in term.items():
                padd(total, w, (c[0] * sign, c[1] * sign))
            sign = 1
            first = False
        return total

    def product(self, stop):
        acc = one()
        while self.peek() not in stop and self.peek() not in ("+", "-"):
            acc = pmul(acc, self.factor())
        return acc

    def group(self):
        if self.peek() == r"\left":
            self.take()
            self.take("(")
            p = self.sum({r"\right"})
            self.take(r"\right")
            self.take(")")
            return p
        self.take("(")
        p = self.sum({")"})
        self.take(")")
        return p

    def factor(self):
        tok = self.peek()
        if tok is None:
            sys.exit("unexpected end of display")
        if tok.isdigit():
            self.take()
            return {(): (Fraction(int(tok)), Fraction(0))}
        if tok == "i":
            self.take()
            return {(): (Fraction(0), Fraction(1))}
        if tok == r"\frac":
            self.take()
            num, den = self.braced(), self.braced()
            if den == "k":
                if num != "1":
                    sys.exit("unexpected fraction over k")
                return letter(("K", -1, 0, 0))
            return {(): (Fraction(int(num), int(den)), Fraction(0))}
        if tok in (r"\sigma", r"\Delta"):
            self.take()
            self.take("(")
            self.take("e")
            self.take(")")
            return letter(("E", 1 if tok == r"\sigma" else 2, 0, 0))
        if tok == "e":
            self.take()
            return letter(("E", 0, 0, 0))
        if tok == "k":
            self.take()
            return letter(("K", self.exponent(), 0, 0))
        if tok == r"\delta":
            self.take()
            self.take("_")
            i = int(self.take())
            power = self.exponent()
            p = self.group()
            for _ in range(power):
                p = delta(i, p)
            return p
        if tok == "D":
            self.take()
            self.take("_")
            m = int(self.take())
            inner = self.group()
            r = {}
            for w, c in inner.items():
                padd(r, (("D", m, normalize(w)),), c)
            return r
        if tok in ("(", r"\left"):
            return self.group()
        sys.exit(f"unexpected token {tok!r} at {self.i}")


def rational_json(f):
    return f.numerator, f.denominator


def word_json(w):
    out = []
    for x in w:
        if x[0] == "D":
            out.append({"t": "Dm", "m": x[1], "arg": word_json(x[2])})
        elif x[0] == "E":
            out.append({"t": "E", "twist": x[1], "d": [x[2], x[3]]})
        else:
            out.append({"t": "K", "n": x[1], "d": [x[2], x[3]]})
    return out


def to_json(p):
    out = []
    for w, c in sorted(p.items(), key=lambda kv: repr(kv[0])):
        rn, rd = rational_json(c[0])
        inn, ind = rational_json(c[1])
        out.append({"word": word_json(w),
                    "coef": {"re_num": rn, "re_den": rd, "im_num": inn, "im_den": ind, "pi_pow": 0}})
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("source")
    ap.add_argument("--side", choices=sorted(OPENERS), required=True)
    ap.add_argument("-o", "--output", default="-")
    args = ap.parse_args()
    with open(args.source, encoding="utf-8") as fh:
        body = extract(fh.read(), args.side)
    reader = Reader(tokenize(body))
    poly = reader.sum({None})
    terms = to_json(poly)
    data = {
        "provenance": f"second reading of the (1/(-2 pi)) tau(a_2(L^{'-' if args.side == 'minus' else '+'})) display, "
                      "Leibniz rule applied to delta of products",
        "side": "Lminus" if args.side == "minus" else "Lplus",
        "terms": terms,
    }
    text = json.dumps(data, indent=1)
    if args.output == "-":
        print(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(f"{args.side}: {len(terms)} terms", file=sys.stderr)


if __name__ == "__main__":
    main()
