"""Generator/critic layer-width pairs under structural constraints.

A constraint binds the *hidden* widths of the two networks.  The generator's
noise input is given the data dimension, so both networks also share their
input width; only the output layers differ (``data_dim`` for the generator,
1 for the critic).

    isomorphic            critic hidden == generator hidden
    mirror                critic hidden == reversed(generator hidden)
    self_symmetric        both use the palindrome half + reversed(half[:-1])
    relative_isomorphic   critic hidden[i] == round(gen hidden[i] * (1 + delta))
"""

import json
from dataclasses import asdict, dataclass, field

from .exceptions import RejectedInputError

CONSTRAINT_KINDS = ("unconstrained", "isomorphic", "mirror", "self_symmetric", "relative_isomorphic")

# r-IWGAN_1 ... r-IWGAN_6
RELATIVE_DELTAS = (0.10, -0.10, 0.20, -0.20, 0.30, -0.30)

DEFAULT_HIDDEN = (64, 32)
# deliberately non-isomorphic critic for the plain WGAN/GAN baselines
UNCONSTRAINED_CRITIC_HIDDEN = (48, 24)


def _delta_percent(delta):
    """Map a permitted delta to an integer percentage, or raise."""
    pct = round(float(delta) * 100)
    if abs(float(delta) * 100 - pct) > 1e-9 or pct not in {round(d * 100) for d in RELATIVE_DELTAS}:
        raise RejectedInputError(
            f"relative-isomorphic delta must be one of {sorted(RELATIVE_DELTAS)}, got {delta}"
        )
    return pct


def scale_width(width, delta):
    """``max(1, round_half_away(width * (1 + delta)))`` in exact integer arithmetic."""
    pct = _delta_percent(delta)
    return max(1, (width * (100 + pct) + 50) // 100)


@dataclass(frozen=True)
class Constraint:
    kind: str = "unconstrained"
    delta: float = None

    def __post_init__(self):
        if self.kind not in CONSTRAINT_KINDS:
            raise RejectedInputError(f"unknown constraint {self.kind!r}; expected one of {CONSTRAINT_KINDS}")
        if self.kind == "relative_isomorphic":
            _delta_percent(self.delta)
        elif self.delta is not None:
            raise RejectedInputError(f"delta only applies to relative_isomorphic, not {self.kind}")


@dataclass(frozen=True)
class ArchSpec:
    data_dim: int
    noise_dim: int
    g_widths: tuple
    d_widths: tuple
    constraint: Constraint = field(default_factory=Constraint)

    @property
    def g_hidden(self):
        return tuple(self.g_widths[1:-1])

    @property
    def d_hidden(self):
        return tuple(self.d_widths[1:-1])

    def to_dict(self):
        d = asdict(self)
        d["g_widths"] = list(self.g_widths)
        d["d_widths"] = list(self.d_widths)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        c = d.get("constraint") or {}
        if isinstance(c, str):
            c = {"kind": c}
        return cls(
            data_dim=int(d["data_dim"]),
            noise_dim=int(d["noise_dim"]),
            g_widths=tuple(int(w) for w in d["g_widths"]),
            d_widths=tuple(int(w) for w in d["d_widths"]),
            constraint=Constraint(c.get("kind", "unconstrained"), c.get("delta")),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _check_hidden(hidden, what="hidden"):
    hidden = tuple(int(w) for w in hidden)
    if not hidden:
        raise RejectedInputError(f"{what} width list must be non-empty")
    if any(w < 1 for w in hidden):
        raise RejectedInputError(f"{what} widths must be >= 1, got {hidden}")
    return hidden


def _check_dim(data_dim):
    if int(data_dim) < 1:
        raise RejectedInputError(f"data_dim must be >= 1, got {data_dim}")
    return int(data_dim)


def _pair(data_dim, g_hidden, d_hidden, constraint, noise_dim=None):
    noise_dim = data_dim if noise_dim is None else int(noise_dim)
    return ArchSpec(
        data_dim=data_dim,
        noise_dim=noise_dim,
        g_widths=(noise_dim, *g_hidden, data_dim),
        d_widths=(data_dim, *d_hidden, 1),
        constraint=constraint,
    )


def build_unconstrained(data_dim, g_hidden=DEFAULT_HIDDEN, d_hidden=UNCONSTRAINED_CRITIC_HIDDEN, noise_dim=None):
    data_dim = _check_dim(data_dim)
    return _pair(data_dim, _check_hidden(g_hidden, "g_hidden"), _check_hidden(d_hidden, "d_hidden"),
                 Constraint("unconstrained"), noise_dim)


def build_isomorphic(data_dim, hidden=DEFAULT_HIDDEN):
    hidden = _check_hidden(hidden)
    return _pair(_check_dim(data_dim), hidden, hidden, Constraint("isomorphic"))


def build_mirror(data_dim, g_hidden=DEFAULT_HIDDEN):
    g_hidden = _check_hidden(g_hidden, "g_hidden")
    return _pair(_check_dim(data_dim), g_hidden, g_hidden[::-1], Constraint("mirror"))


def palindrome(half):
    """``half ++ reversed(half[:-1])``: [64, 32] -> [64, 32, 64]."""
    half = tuple(half)
    return half + half[:-1][::-1]


def build_self_symmetric(data_dim, half=DEFAULT_HIDDEN):
    hidden = palindrome(_check_hidden(half, "half"))
    return _pair(_check_dim(data_dim), hidden, hidden, Constraint("self_symmetric"))


def build_relative_isomorphic(data_dim, hidden=DEFAULT_HIDDEN, delta=0.10):
    hidden = _check_hidden(hidden)
    constraint = Constraint("relative_isomorphic", float(delta))
    return _pair(_check_dim(data_dim), hidden, tuple(scale_width(w, delta) for w in hidden), constraint)


def validate(spec):
    """Return a list of violated invariants; an empty list means the architecture is valid."""
    problems = []
    g, d = tuple(spec.g_widths), tuple(spec.d_widths)
    if len(g) < 2:
        problems.append("g_widths needs at least an input and an output width")
    if len(d) < 2:
        problems.append("d_widths needs at least an input and an output width")
    if problems:
        return problems
    if g[0] != spec.noise_dim:
        problems.append(f"g_widths first ({g[0]}) != noise_dim ({spec.noise_dim})")
    if g[-1] != spec.data_dim:
        problems.append(f"g_widths last ({g[-1]}) != data_dim ({spec.data_dim})")
    if d[0] != spec.data_dim:
        problems.append(f"d_widths first ({d[0]}) != data_dim ({spec.data_dim})")
    if d[-1] != 1:
        problems.append(f"d_widths last ({d[-1]}) != 1")
    for name, widths in (("g_widths", g), ("d_widths", d)):
        bad = [i for i, w in enumerate(widths) if w < 1]
        if bad:
            problems.append(f"{name} has widths < 1 at positions {bad}")

    kind = spec.constraint.kind
    gh, dh = g[1:-1], d[1:-1]
    if kind != "unconstrained" and spec.noise_dim != spec.data_dim:
        problems.append(f"{kind}: noise_dim ({spec.noise_dim}) must equal data_dim ({spec.data_dim})")
    if kind in ("isomorphic", "mirror", "self_symmetric", "relative_isomorphic"):
        if not gh:
            problems.append(f"{kind}: generator has no hidden layers")
        if len(gh) != len(dh):
            problems.append(f"{kind}: hidden layer counts differ ({len(gh)} vs {len(dh)})")
            return problems

    if kind == "isomorphic":
        problems += [f"hidden widths differ at layer {i}" for i, (a, b) in enumerate(zip(gh, dh)) if a != b]
    elif kind == "mirror":
        problems += [f"critic hidden layer {i} is not the mirror of generator layer {len(gh) - 1 - i}"
                     for i, (a, b) in enumerate(zip(gh[::-1], dh)) if a != b]
    elif kind == "self_symmetric":
        if gh != gh[::-1]:
            problems.append("generator hidden widths are not a palindrome")
        if dh != dh[::-1]:
            problems.append("critic hidden widths are not a palindrome")
        problems += [f"hidden widths differ at layer {i}" for i, (a, b) in enumerate(zip(gh, dh)) if a != b]
    elif kind == "relative_isomorphic":
        delta = spec.constraint.delta
        try:
            expected = [scale_width(w, delta) for w in gh]
        except RejectedInputError as exc:
            problems.append(str(exc))
        else:
            problems += [f"critic hidden layer {i} is {b}, expected {e} for delta {delta:+.2f}"
                         for i, (b, e) in enumerate(zip(dh, expected)) if b != e]
    return problems


def build(kind, data_dim, hidden=DEFAULT_HIDDEN, delta=None, d_hidden=None):
    """Dispatch on constraint kind; ``d_hidden`` is used only for ``unconstrained``."""
    if kind == "isomorphic":
        return build_isomorphic(data_dim, hidden)
    if kind == "mirror":
        return build_mirror(data_dim, hidden)
    if kind == "self_symmetric":
        return build_self_symmetric(data_dim, hidden)
    if kind == "relative_isomorphic":
        return build_relative_isomorphic(data_dim, hidden, delta)
    if kind == "unconstrained":
        return build_unconstrained(data_dim, hidden, d_hidden or UNCONSTRAINED_CRITIC_HIDDEN)
    raise RejectedInputError(f"unknown constraint {kind!r}; expected one of {CONSTRAINT_KINDS}")
