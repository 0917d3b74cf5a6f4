"""Graph containers: alphabets, variables, factor tensors, and the NFG.

Conventions used throughout the package:

* alphabet elements are the integers 0..size-1;
* a vector-space alphabet over the prime field F_p with dimension k
  identifies element v with its base-p digit vector, least-significant
  digit first, so size == p**k;
* tensor values are stored C-ordered, i.e. the flat layout has the last
  port's index varying fastest;
* an internal variable occupies exactly two factor-port slots in a normal
  graph (both slots may sit on the same factor: a self-loop), an external
  variable exactly one.  The ``Nfg`` constructor only checks that
  references resolve, so the same type also represents general (not yet
  normal) realizations; :func:`validate` reports the degree rules.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .errors import GraphError

EXTERNAL = "external"
INTERNAL = "internal"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Alphabet:
    """A finite value domain, optionally a vector space over a prime field.

    ``field`` is None for a plain alphabet, or a pair ``(p, k)`` with p
    prime and size == p**k.
    """

    id: str
    size: int
    field: tuple[int, int] | None = None

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise GraphError(f"alphabet {self.id!r}: size must be a positive integer")
        if self.field is not None:
            field = (int(self.field[0]), int(self.field[1]))
            object.__setattr__(self, "field", field)
            p, k = field
            if not _is_prime(p):
                raise GraphError(f"alphabet {self.id!r}: field characteristic {p} is not prime")
            if k < 1:
                raise GraphError(f"alphabet {self.id!r}: field dimension must be >= 1")
            if self.size != p**k:
                raise GraphError(
                    f"alphabet {self.id!r}: size {self.size} != {p}**{k} required by its field"
                )

    @property
    def is_vector_space(self) -> bool:
        return self.field is not None

    def _require_field(self):
        if self.field is None:
            raise GraphError(f"alphabet {self.id!r} has no vector-space structure")
        return self.field

    def digits(self, value: int) -> tuple[int, ...]:
        """Base-p digit vector of an element, least-significant digit first."""
        p, k = self._require_field()
        out = []
        for _ in range(k):
            value, d = divmod(value, p)
            out.append(d)
        return tuple(out)

    def from_digits(self, digits) -> int:
        p, _ = self._require_field()
        value = 0
        for d in reversed(tuple(digits)):
            value = value * p + int(d) % p
        return value

    def negate(self, value: int) -> int:
        """Additive inverse, computed digitwise mod p."""
        p, _ = self._require_field()
        return self.from_digits((-d) % p for d in self.digits(value))

    def inner(self, a: int, b: int) -> int:
        """Z_p-valued inner product of two elements' digit vectors."""
        p, _ = self._require_field()
        return sum(x * y for x, y in zip(self.digits(a), self.digits(b))) % p


@dataclass(frozen=True)
class Variable:
    id: str
    alphabet: Alphabet
    kind: str

    def __post_init__(self):
        if self.kind not in (EXTERNAL, INTERNAL):
            raise GraphError(f"variable {self.id!r}: kind must be 'external' or 'internal'")

    @property
    def is_external(self) -> bool:
        return self.kind == EXTERNAL


@dataclass(frozen=True, eq=False)
class FactorTensor:
    """A dense tensor of complex values attached to named ports.

    ``ports`` are port names (variable ids once the tensor sits in a
    graph); ``alphabets`` gives the axis domains.  ``values`` may be passed
    flat (length = product of sizes, last port fastest) or already shaped.
    """

    id: str
    ports: tuple[str, ...]
    alphabets: tuple[Alphabet, ...]
    values: np.ndarray

    def __post_init__(self):
        ports = tuple(self.ports)
        alphabets = tuple(self.alphabets)
        if len(ports) != len(alphabets):
            raise GraphError(f"factor {self.id!r}: {len(ports)} ports but {len(alphabets)} alphabets")
        if len(set(ports)) < len(ports) and max(ports.count(p) for p in ports) > 2:
            raise GraphError(f"factor {self.id!r}: a port name may repeat at most twice (self-loop)")
        shape = tuple(a.size for a in alphabets)
        arr = np.asarray(self.values, dtype=np.complex128)
        if arr.shape != shape:
            expected = int(np.prod(shape)) if shape else 1
            if arr.size != expected:
                raise GraphError(
                    f"factor {self.id!r}: got {arr.size} values, ports require {expected}"
                )
            arr = arr.reshape(shape)
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "ports", ports)
        object.__setattr__(self, "alphabets", alphabets)
        object.__setattr__(self, "values", arr)

    @property
    def degree(self) -> int:
        return len(self.ports)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    def flat(self) -> np.ndarray:
        """Row-major flat view, last port's index varying fastest."""
        return self.values.reshape(-1)

    def with_id(self, id: str) -> "FactorTensor":
        return dataclasses.replace(self, id=id)

    def with_ports(self, ports) -> "FactorTensor":
        return dataclasses.replace(self, ports=tuple(ports))


class Nfg:
    """A factor graph with an explicit scalar prefactor.

    Immutable after construction; every operation in this package returns
    a new graph.  Construction checks that all references resolve and that
    tensor shapes agree with their ports, but not the normality degree
    rules -- see :func:`validate`.
    """

    __slots__ = ("alphabets", "variables", "factors", "prefactor", "_slots")

    def __init__(self, alphabets, variables, factors, prefactor=1.0 + 0.0j):
        alpha = {}
        for a in alphabets:
            if a.id in alpha:
                raise GraphError(f"duplicate alphabet id {a.id!r}")
            alpha[a.id] = a
        var = {}
        for v in variables:
            if v.id in var:
                raise GraphError(f"duplicate variable id {v.id!r}")
            declared = alpha.get(v.alphabet.id)
            if declared is None or declared != v.alphabet:
                raise GraphError(f"variable {v.id!r} references undeclared alphabet {v.alphabet.id!r}")
            var[v.id] = v
        fac = {}
        slots: dict[str, list[tuple[str, int]]] = {v: [] for v in var}
        for f in factors:
            if f.id in fac:
                raise GraphError(f"duplicate factor id {f.id!r}")
            for i, (port, a) in enumerate(zip(f.ports, f.alphabets)):
                pv = var.get(port)
                if pv is None:
                    raise GraphError(f"factor {f.id!r} port {i} references undeclared variable {port!r}")
                if pv.alphabet != a:
                    raise GraphError(
                        f"factor {f.id!r} port {i}: tensor alphabet {a.id!r} does not match "
                        f"variable {port!r} alphabet {pv.alphabet.id!r}"
                    )
                slots[port].append((f.id, i))
            fac[f.id] = f
        object.__setattr__(self, "alphabets", MappingProxyType(alpha))
        object.__setattr__(self, "variables", MappingProxyType(var))
        object.__setattr__(self, "factors", MappingProxyType(fac))
        object.__setattr__(self, "prefactor", complex(prefactor))
        object.__setattr__(
            self, "_slots", MappingProxyType({v: tuple(sorted(s)) for v, s in slots.items()})
        )

    def __setattr__(self, name, value):
        raise AttributeError("Nfg is immutable")

    def slots(self, variable: str) -> tuple[tuple[str, int], ...]:
        """(factor id, port index) pairs where the variable appears, sorted."""
        try:
            return self._slots[variable]
        except KeyError:
            raise GraphError(f"unknown variable {variable!r}") from None

    def degree(self, variable: str) -> int:
        return len(self.slots(variable))

    def external_ids(self) -> tuple[str, ...]:
        return tuple(sorted(v for v, var in self.variables.items() if var.is_external))

    def internal_ids(self) -> tuple[str, ...]:
        return tuple(sorted(v for v, var in self.variables.items() if not var.is_external))

    def replace(self, *, alphabets=None, variables=None, factors=None, prefactor=None) -> "Nfg":
        """Copy with selected parts swapped out (mappings or iterables)."""

        def as_values(part, current):
            if part is None:
                return current.values()
            return part.values() if hasattr(part, "values") else part

        return Nfg(
            as_values(alphabets, self.alphabets),
            as_values(variables, self.variables),
            as_values(factors, self.factors),
            self.prefactor if prefactor is None else prefactor,
        )


@dataclass(frozen=True)
class Violation:
    subject: str
    rule: str
    message: str

    def __str__(self):
        return f"{self.subject}: {self.message}"


def validate(nfg: Nfg) -> list[Violation]:
    """Report every normality violation; an empty list means valid.

    External variables must occupy exactly one port slot, internal
    variables exactly two.
    """
    out = []
    for vid, var in nfg.variables.items():
        deg = nfg.degree(vid)
        if var.is_external and deg != 1:
            out.append(
                Violation(vid, "external-degree", f"external variable appears in {deg} port slots, expected 1")
            )
        if not var.is_external and deg != 2:
            out.append(
                Violation(vid, "internal-degree", f"internal variable appears in {deg} port slots, expected 2")
            )
    return out


def components(nfg: Nfg) -> list[Nfg]:
    """Split into connected components (factors connected through shared
    variables).  Every variable must be referenced by some factor."""
    for vid in nfg.variables:
        if nfg.degree(vid) == 0:
            raise GraphError(f"variable {vid!r} is referenced by no factor")
    parent: dict[str, str] = {fid: fid for fid in nfg.factors}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for vid in nfg.variables:
        slots = nfg.slots(vid)
        for (fid, _) in slots[1:]:
            parent[find(fid)] = find(slots[0][0])

    groups: dict[str, list[str]] = {}
    for fid in nfg.factors:
        groups.setdefault(find(fid), []).append(fid)

    out = []
    for root in sorted(groups):
        fids = sorted(groups[root])
        vids = sorted({p for fid in fids for p in nfg.factors[fid].ports})
        aids = sorted({nfg.variables[v].alphabet.id for v in vids})
        out.append(
            Nfg(
                [nfg.alphabets[a] for a in aids],
                [nfg.variables[v] for v in vids],
                [nfg.factors[f] for f in fids],
                prefactor=nfg.prefactor if not out else 1.0,
            )
        )
    return out


def uniquify(taken, base: str) -> str:
    """Deterministically pick an id not present in ``taken``."""
    if base not in taken:
        return base
    i = 2
    while f"{base}~{i}" in taken:
        i += 1
    return f"{base}~{i}"


class GraphBuilder:
    """Convenience accumulator for constructing graphs in code.

    >>> b = GraphBuilder()
    >>> idx = b.alphabet("idx", 3)
    >>> b.internal("y", idx)
    'y'
    >>> b.factor("m", ["y", "y"], np.eye(3))
    'm'
    >>> z = b.build()
    """

    def __init__(self):
        self._alphabets: dict[str, Alphabet] = {}
        self._variables: dict[str, Variable] = {}
        self._factors: dict[str, FactorTensor] = {}

    def alphabet(self, id: str, size: int, field=None) -> Alphabet:
        a = Alphabet(id, size, field)
        seen = self._alphabets.get(id)
        if seen is not None and seen != a:
            raise GraphError(f"conflicting redefinition of alphabet {id!r}")
        self._alphabets[id] = a
        return a

    def add_alphabet(self, alphabet: Alphabet) -> Alphabet:
        seen = self._alphabets.get(alphabet.id)
        if seen is not None and seen != alphabet:
            raise GraphError(f"conflicting redefinition of alphabet {alphabet.id!r}")
        self._alphabets[alphabet.id] = alphabet
        return alphabet

    def _variable(self, id, alphabet, kind) -> str:
        if isinstance(alphabet, str):
            try:
                alphabet = self._alphabets[alphabet]
            except KeyError:
                raise GraphError(f"variable {id!r} references unknown alphabet {alphabet!r}") from None
        else:
            self.add_alphabet(alphabet)
        if id in self._variables:
            raise GraphError(f"duplicate variable id {id!r}")
        self._variables[id] = Variable(id, alphabet, kind)
        return id

    def external(self, id: str, alphabet) -> str:
        return self._variable(id, alphabet, EXTERNAL)

    def internal(self, id: str, alphabet) -> str:
        return self._variable(id, alphabet, INTERNAL)

    def variable(self, id: str) -> Variable:
        try:
            return self._variables[id]
        except KeyError:
            raise GraphError(f"unknown variable {id!r}") from None

    def factor(self, id: str, ports, values) -> str:
        """Attach a factor; ``values`` may be array-like or a FactorTensor."""
        ports = tuple(ports)
        alphabets = []
        for p in ports:
            v = self._variables.get(p)
            if v is None:
                raise GraphError(f"factor {id!r} references unknown variable {p!r}")
            alphabets.append(v.alphabet)
        if isinstance(values, FactorTensor):
            values = values.values
        if id in self._factors:
            raise GraphError(f"duplicate factor id {id!r}")
        self._factors[id] = FactorTensor(id, ports, tuple(alphabets), values)
        return id

    def build(self, prefactor=1.0 + 0.0j) -> Nfg:
        return Nfg(
            self._alphabets.values(),
            self._variables.values(),
            self._factors.values(),
            prefactor,
        )
