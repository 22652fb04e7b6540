"""Scenario files: one JSON document bundling a lattice, named vectors,
an optional decomposition, stability functions, characters, filtrations
and representations, plus search budgets.

Everything on the wire is exact: rationals are "p/q" strings, Gaussian
rationals are {"re": "p/q", "im": "p/q"} objects.  Scenarios have a
canonical serialized form whose SHA-256 digest keys reports.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .decomposition import PolystableDecomposition
from .errors import QuiverModuliError, ScenarioError
from .lattice import GramLattice, LatticeVector
from .quiver import ExtQuiver, build_ext_quiver
from .representation import DoubleQuiverRep, SearchLimits
from .stability import GaussianRational, StabilityFunction

DEFAULT_BUDGETS = {
    "root_budget": 200_000,
    "search_budget": 100_000,
    "box_bound": 6,
    "prng_seed": 0,
    "prng_samples": 8,
}


def frac_to_str(x) -> str:
    return str(Fraction(x))


def gauss_to_obj(z: GaussianRational) -> dict:
    return {"re": frac_to_str(z.re), "im": frac_to_str(z.im)}


def _parse_frac(raw, path: str, violations: list) -> Fraction:
    try:
        return Fraction(raw)
    except (ValueError, TypeError, ZeroDivisionError):
        violations.append((path, f"not a rational: {raw!r}"))
        return Fraction(0)


def _parse_gauss(raw, path: str, violations: list) -> GaussianRational:
    if not isinstance(raw, dict) or set(raw) - {"re", "im"}:
        violations.append((path, "expected an object with keys 're' and 'im'"))
        return GaussianRational.of(0)
    return GaussianRational(
        _parse_frac(raw.get("re", "0"), f"{path}.re", violations),
        _parse_frac(raw.get("im", "0"), f"{path}.im", violations),
    )


@dataclass
class Scenario:
    lattice: GramLattice
    vectors: dict[str, LatticeVector]
    decomposition: Optional[PolystableDecomposition] = None
    stability: dict[str, StabilityFunction] = field(default_factory=dict)
    characters: dict[str, tuple[Fraction, ...]] = field(default_factory=dict)
    filtrations: dict[str, tuple[tuple[int, str], ...]] = field(default_factory=dict)
    quiver: Optional[ExtQuiver] = None
    representations: dict[str, DoubleQuiverRep] = field(default_factory=dict)
    budgets: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_BUDGETS))

    def effective_quiver(self) -> ExtQuiver:
        if self.quiver is not None:
            return self.quiver
        if self.decomposition is not None:
            return build_ext_quiver(self.decomposition)
        raise QuiverModuliError(
            "scenario has neither an explicit quiver nor a decomposition"
        )

    def search_limits(self, seed: Optional[int] = None, budget: Optional[int] = None) -> SearchLimits:
        return SearchLimits(
            budget=budget if budget is not None else self.budgets["search_budget"],
            prng_samples=self.budgets.get("prng_samples", 8),
            seed=seed if seed is not None else self.budgets["prng_seed"],
        )

    def canonical(self) -> dict:
        doc: dict = {
            "lattice": {
                "gram": [list(row) for row in self.lattice.gram],
                "even": self.lattice.even,
            },
            "vectors": {
                name: list(v.coords) for name, v in sorted(self.vectors.items())
            },
            "budgets": {k: self.budgets[k] for k in sorted(self.budgets)},
        }
        if self.decomposition is not None:
            doc["decomposition"] = [
                {"vector": self._vector_name(v), "multiplicity": n}
                for v, n in self.decomposition.summands
            ]
        if self.stability:
            doc["stability"] = {
                name: [gauss_to_obj(z) for z in fn.values]
                for name, fn in sorted(self.stability.items())
            }
        if self.characters:
            doc["characters"] = {
                name: [frac_to_str(t) for t in theta]
                for name, theta in sorted(self.characters.items())
            }
        if self.filtrations:
            doc["filtrations"] = {
                name: [{"weight": w, "class": v} for w, v in steps]
                for name, steps in sorted(self.filtrations.items())
            }
        if self.quiver is not None:
            doc["quiver"] = {
                "loops": list(self.quiver.loops),
                "arrows": [list(a) for a in self.quiver.arrows],
            }
        if self.representations:
            doc["representations"] = {
                name: {
                    "n": list(rep.n),
                    "x": [[[frac_to_str(x) for x in row] for row in m] for m in rep.x_maps],
                    "y": [[[frac_to_str(x) for x in row] for row in m] for m in rep.y_maps],
                }
                for name, rep in sorted(self.representations.items())
            }
        return doc

    def _vector_name(self, v: LatticeVector) -> str:
        for name, vec in self.vectors.items():
            if vec.coords == v.coords:
                return name
        raise QuiverModuliError(f"decomposition class {v.coords} has no name")

    def digest(self) -> str:
        payload = json.dumps(
            self.canonical(), sort_keys=True, separators=(",", ":")
        ).encode()
        return "sha256:" + hashlib.sha256(payload).hexdigest()


def load_scenario(source: Union[str, Path, dict]) -> Scenario:
    """Parse and fully validate a scenario; raise ScenarioError with a
    list of (json_path, message) violations if anything is off."""
    if isinstance(source, dict):
        doc = source
    else:
        text = str(source)
        try:
            path = Path(text)
            if path.exists():
                text = path.read_text()
        except (OSError, ValueError):
            pass  # not a usable path; treat as inline JSON text
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError([("$", f"invalid JSON: {exc}")])
    if not isinstance(doc, dict):
        raise ScenarioError([("$", "top level must be an object")])

    violations: list[tuple[str, str]] = []

    lat_doc = doc.get("lattice")
    if not isinstance(lat_doc, dict) or "gram" not in lat_doc:
        raise ScenarioError([("$.lattice", "missing lattice.gram")])
    try:
        lattice = GramLattice(
            tuple(tuple(row) for row in lat_doc["gram"]),
            even=bool(lat_doc.get("even", False)),
        )
    except (QuiverModuliError, TypeError) as exc:
        raise ScenarioError([("$.lattice.gram", str(exc))])

    vectors: dict[str, LatticeVector] = {}
    vec_doc = doc.get("vectors", {})
    if not isinstance(vec_doc, dict):
        violations.append(("$.vectors", "must be an object of name -> coords"))
        vec_doc = {}
    for name, coords in vec_doc.items():
        if name in vectors:
            violations.append((f"$.vectors.{name}", "duplicate vector name"))
            continue
        try:
            vectors[name] = lattice.vector(coords)
        except (QuiverModuliError, TypeError, ValueError) as exc:
            violations.append((f"$.vectors.{name}", str(exc)))

    decomposition = None
    dec_doc = doc.get("decomposition")
    if dec_doc is not None:
        summands = []
        for k, entry in enumerate(dec_doc):
            path = f"$.decomposition[{k}]"
            if not isinstance(entry, dict) or "vector" not in entry:
                violations.append((path, "expected {vector, multiplicity}"))
                continue
            name = entry["vector"]
            if name not in vectors:
                violations.append((f"{path}.vector", f"unknown vector {name!r}"))
                continue
            summands.append((vectors[name], int(entry.get("multiplicity", 1))))
        if summands and not violations:
            try:
                decomposition = PolystableDecomposition.of(summands)
            except QuiverModuliError as exc:
                violations.append(("$.decomposition", str(exc)))

    stability: dict[str, StabilityFunction] = {}
    for name, values in (doc.get("stability") or {}).items():
        path = f"$.stability.{name}"
        if not isinstance(values, list) or len(values) != lattice.rank:
            violations.append(
                (path, f"expected {lattice.rank} basis values, got {values!r}")
            )
            continue
        parsed = tuple(
            _parse_gauss(v, f"{path}[{k}]", violations) for k, v in enumerate(values)
        )
        stability[name] = StabilityFunction(lattice, parsed)

    characters: dict[str, tuple[Fraction, ...]] = {}
    for name, values in (doc.get("characters") or {}).items():
        path = f"$.characters.{name}"
        if not isinstance(values, list):
            violations.append((path, "expected a list of rationals"))
            continue
        characters[name] = tuple(
            _parse_frac(v, f"{path}[{k}]", violations) for k, v in enumerate(values)
        )

    filtrations: dict[str, tuple[tuple[int, str], ...]] = {}
    for name, steps in (doc.get("filtrations") or {}).items():
        path = f"$.filtrations.{name}"
        if not isinstance(steps, list):
            violations.append((path, "expected a list of {weight, vector}"))
            continue
        parsed_steps = []
        for k, step in enumerate(steps):
            if not isinstance(step, dict) or "weight" not in step or "class" not in step:
                violations.append((f"{path}[{k}]", "expected {weight, class}"))
                continue
            if step["class"] not in vectors:
                violations.append(
                    (f"{path}[{k}].class", f"unknown vector {step['class']!r}")
                )
                continue
            parsed_steps.append((int(step["weight"]), step["class"]))
        filtrations[name] = tuple(parsed_steps)

    quiver = None
    q_doc = doc.get("quiver")
    if q_doc is not None:
        try:
            quiver = ExtQuiver(
                tuple(q_doc.get("loops", ())),
                tuple(tuple(a) for a in q_doc.get("arrows", ())),
            )
        except (QuiverModuliError, TypeError) as exc:
            violations.append(("$.quiver", str(exc)))

    budgets = dict(DEFAULT_BUDGETS)
    for key, value in (doc.get("budgets") or {}).items():
        if key not in DEFAULT_BUDGETS:
            violations.append((f"$.budgets.{key}", "unknown budget key"))
            continue
        try:
            budgets[key] = int(value)
        except (TypeError, ValueError):
            violations.append((f"$.budgets.{key}", f"not an integer: {value!r}"))

    scenario = Scenario(
        lattice=lattice,
        vectors=vectors,
        decomposition=decomposition,
        stability=stability,
        characters=characters,
        filtrations=filtrations,
        quiver=quiver,
        budgets=budgets,
    )

    for name, rep_doc in (doc.get("representations") or {}).items():
        path = f"$.representations.{name}"
        try:
            q = scenario.effective_quiver()
        except QuiverModuliError as exc:
            violations.append((path, f"no quiver available: {exc}"))
            break
        if not isinstance(rep_doc, dict) or "n" not in rep_doc:
            violations.append((path, "expected {n, x, y}"))
            continue
        try:
            n = tuple(int(x) for x in rep_doc["n"])
            xs = tuple(
                tuple(tuple(Fraction(x) for x in row) for row in m)
                for m in rep_doc.get("x", ())
            )
            ys = tuple(
                tuple(tuple(Fraction(x) for x in row) for row in m)
                for m in rep_doc.get("y", ())
            )
            scenario.representations[name] = DoubleQuiverRep(q, n, xs, ys)
        except (QuiverModuliError, TypeError, ValueError, ZeroDivisionError) as exc:
            violations.append((path, str(exc)))

    if violations:
        raise ScenarioError(violations)
    return scenario
