"""Polystable decompositions v = sum(n_i * v_i) at lattice level."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import HomNonvanishingError, MalformedSummandError
from .lattice import GramLattice, LatticeVector, pairing, square


@dataclass(frozen=True)
class PolystableDecomposition:
    """Classes and multiplicities of the stable summands of a polystable
    object: pairwise distinct classes v_i with multiplicities n_i >= 1.

    Stable summands of equal phase force the invariants checked here:
    every square is even and >= -2, and distinct classes pair >= 0.
    """

    summands: tuple[tuple[LatticeVector, int], ...]

    def __post_init__(self):
        summands = tuple((v, int(n)) for v, n in self.summands)
        object.__setattr__(self, "summands", summands)
        if not summands:
            raise MalformedSummandError("decomposition needs at least one summand")
        lat = summands[0][0].lattice
        seen = set()
        for v, n in summands:
            if v.lattice != lat:
                raise MalformedSummandError("summands live in different lattices")
            if n < 1:
                raise MalformedSummandError(f"multiplicity {n} is not positive")
            if v.coords in seen:
                raise MalformedSummandError(f"duplicate summand class {v.coords}")
            seen.add(v.coords)
            sq = square(v)
            if sq < -2 or sq % 2 != 0:
                raise MalformedSummandError(
                    f"summand {v.coords} has square {sq}; need an even square >= -2"
                )
        for i in range(len(summands)):
            for j in range(i + 1, len(summands)):
                p = pairing(summands[i][0], summands[j][0])
                if p < 0:
                    raise HomNonvanishingError(
                        f"summands {i} and {j} pair to {p} < 0"
                    )

    @classmethod
    def of(cls, pairs: Iterable[tuple[LatticeVector, int]]) -> "PolystableDecomposition":
        return cls(tuple(pairs))

    @property
    def lattice(self) -> GramLattice:
        return self.summands[0][0].lattice

    @property
    def size(self) -> int:
        return len(self.summands)

    @property
    def classes(self) -> tuple[LatticeVector, ...]:
        return tuple(v for v, _ in self.summands)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(n for _, n in self.summands)

    def total(self) -> LatticeVector:
        out = self.lattice.zero()
        for v, n in self.summands:
            out = out + n * v
        return out

    def combination(self, coeffs: Iterable[int]) -> LatticeVector:
        """The class sum(a_i * v_i) for integer coefficients a_i."""
        coeffs = tuple(int(a) for a in coeffs)
        if len(coeffs) != self.size:
            raise MalformedSummandError(
                f"{len(coeffs)} coefficients for {self.size} summands"
            )
        out = self.lattice.zero()
        for a, (v, _) in zip(coeffs, self.summands):
            out = out + a * v
        return out
