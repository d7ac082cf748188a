"""Job files: parse a JSON job, run its commands, serialize the report.

A job names covers, lattices, tori, sheaves and motives over one F_q and
lists commands of the form {"target": name, "op": op, "options": {...}}.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import FFWeilError, FormatUnsupported, ParseError, ValidationError, VerificationFailed
from .exact import Base, RationalFunctionQ, TruncatedSeries, format_fraction, laurent_lead
from .fields import AbelianCover, Place, constant_field_of_cover, decomposition, enumerate_places, genus_of_cover
from .fields import get_field, parse_fq_rational, prime_power
from .galois import (
    FrobModule,
    GaloisLattice,
    coinvariants,
    dual_lattice,
    group_h1,
    invariants,
    product_lattice,
    sha_kernel,
    standard_lattice,
    tate_cohomology_cyclic,
)
from .lfunctions import (
    Pushforward,
    Skyscraper,
    VirtualSheaf,
    artin_conductor,
    check_functional_equation,
    configured,
    l_function,
    l_truncated,
    zeta_of_cover,
)
from .motives import OneMotive, chi_w_motive, l_motive, r_m, verify_theorem_main, x_delta
from .tori import (
    ClassData,
    chi_w_torus,
    class_data,
    custom_torus,
    h1_ky,
    induced_torus,
    l_torus,
    norm_one_torus,
    ono_table,
    product_torus,
    rho_t,
    sha_of_torus,
    split_torus,
    tamagawa_modern,
    tamagawa_ono,
    verify_ono,
    verify_torus_theorem,
)
from .weil_etale import chi_w_virtual, r_of, verify_theorem_constructible

SCHEMA_VERSION = 1
ONO_COLUMNS = ["q", "n", "tau_ono", "tau_modern", "verdict"]


# ---------------------------------------------------------------------------
# job specification


@dataclass
class Command:
    target: str
    op: str
    options: dict = field(default_factory=dict)


@dataclass
class JobSpec:
    q: int | None
    covers: dict = field(default_factory=dict)
    lattices: dict = field(default_factory=dict)
    tori: dict = field(default_factory=dict)
    sheaves: dict = field(default_factory=dict)
    motives: dict = field(default_factory=dict)
    commands: list = field(default_factory=list)
    max_depth: int | None = None
    threads: int | None = None
    schema_version: int = SCHEMA_VERSION

    def kind_of(self, name):
        for kind in ("covers", "lattices", "tori", "sheaves", "motives"):
            if name in getattr(self, kind):
                return kind
        if name in ("places", "ono_table"):
            return name
        return None


def _need(mapping, key, where):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ParseError(f"{where}: missing field '{key}'")
    return mapping[key]


def _as_int(x, where):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{where}: expected an integer, got {x!r}")
    return x


def _matrix(x, where):
    if not isinstance(x, list) or not all(isinstance(r, list) for r in x):
        raise ParseError(f"{where}: expected a matrix as a list of rows")
    return [[_as_int(v, where) for v in r] for r in x]


def _place(field_, spec, where):
    if spec == "inf":
        return Place.infinity()
    if isinstance(spec, list):
        poly = tuple(_as_int(c, where) for c in spec)
    else:
        rat = parse_fq_rational(field_, spec)
        if rat.den != (1,):
            raise ValidationError(f"{where}: a place must be a polynomial")
        poly = rat.num
    if not poly or poly[-1] != 1 or not field_.p_is_irreducible(poly):
        raise ValidationError(f"{where}: {spec!r} is not a monic irreducible polynomial")
    return Place.finite(poly)


def parse_jobspec(source) -> JobSpec:
    """Parse and validate a job from a path, JSON text or an already decoded mapping."""
    if isinstance(source, dict):
        data = source
    else:
        text = source
        if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
            try:
                text = Path(source).read_text()
            except OSError as exc:
                raise ParseError(f"cannot read job file: {exc}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParseError("job must be a JSON object")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValidationError(f"unsupported schema_version {version!r}")
    q = data.get("q")
    fld = None
    if q is not None:
        q = _as_int(q, "q")
        prime_power(q)
        fld = get_field(q)
    job = JobSpec(q, schema_version=version)
    overrides = data.get("overrides", {}) or {}
    if "max_depth" in overrides:
        job.max_depth = _as_int(overrides["max_depth"], "overrides.max_depth")
    if "threads" in overrides:
        job.threads = _as_int(overrides["threads"], "overrides.threads")

    def need_field(where):
        if fld is None:
            raise ValidationError(f"{where}: job has no field size q")
        return fld

    for name, spec in (data.get("covers") or {}).items():
        where = f"covers.{name}"
        f = need_field(where)
        kummer = []
        for i, k in enumerate(spec.get("kummer", [])):
            kummer.append((_as_int(_need(k, "m", f"{where}.kummer[{i}]"), where), _need(k, "f", where)))
        try:
            job.covers[name] = AbelianCover.build(f, _as_int(spec.get("constant_degree", 1), where), kummer)
        except ValidationError as exc:
            raise type(exc)(f"{where}: {exc}") from None

    def cover_ref(ref, where):
        if ref not in job.covers:
            raise ValidationError(f"{where}: unknown cover {ref!r}")
        return job.covers[ref]

    pending = dict(data.get("lattices") or {})
    # lattices may refer to one another; resolve in passes
    while pending:
        progressed = False
        for name in list(pending):
            spec = pending[name]
            where = f"lattices.{name}"
            deps = [spec["dual"]] if "dual" in spec else list(spec.get("product", []))
            if any(d in pending for d in deps):
                continue
            for d in deps:
                if d not in job.lattices:
                    raise ValidationError(f"{where}: unknown lattice {d!r}")
            if "dual" in spec:
                lat = dual_lattice(job.lattices[spec["dual"]])
            elif "product" in spec:
                parts = [job.lattices[d] for d in spec["product"]]
                lat = parts[0]
                for p in parts[1:]:
                    lat = product_lattice(lat, p)
            else:
                cover = cover_ref(_need(spec, "cover", where), where)
                if "matrices" in spec:
                    mats = [_matrix(m, where) for m in spec["matrices"]]
                    lat = GaloisLattice(cover.orders, tuple(mats))
                else:
                    lat = standard_lattice(_need(spec, "kind", where), cover.orders, spec.get("d", 1))
            job.lattices[name] = lat
            del pending[name]
            progressed = True
        if not progressed:
            raise ValidationError(f"lattices: circular references among {sorted(pending)}")

    tori_specs = dict(data.get("tori") or {})
    while tori_specs:
        progressed = False
        for name in list(tori_specs):
            spec = tori_specs[name]
            where = f"tori.{name}"
            fam = _need(spec, "family", where)
            if fam == "product" and any(d in tori_specs for d in spec.get("factors", [])):
                continue
            job.tori[name] = _build_torus(job, spec, fam, where, need_field, cover_ref)
            del tori_specs[name]
            progressed = True
        if not progressed:
            raise ValidationError(f"tori: circular references among {sorted(tori_specs)}")

    for name, spec in (data.get("sheaves") or {}).items():
        where = f"sheaves.{name}"
        f = need_field(where)
        terms = []
        for i, term in enumerate(_need(spec, "terms", where)):
            tw = f"{where}.terms[{i}]"
            mult = _as_int(term.get("mult", 1), tw)
            if "pushforward" in term:
                pf = term["pushforward"]
                cover = cover_ref(_need(pf, "cover", tw), tw)
                lref = _need(pf, "lattice", tw)
                if lref not in job.lattices:
                    raise ValidationError(f"{tw}: unknown lattice {lref!r}")
                terms.append((mult, Pushforward(cover, job.lattices[lref])))
            elif "skyscraper" in term:
                sk = term["skyscraper"]
                place = _place(f, _need(sk, "place", tw), tw)
                frob = _matrix(_need(sk, "frobenius", tw), tw)
                inv = sk.get("invariants", [0] * len(frob))
                terms.append((mult, Skyscraper(place, FrobModule(tuple(inv), frob), f)))
            else:
                raise ParseError(f"{tw}: term needs 'pushforward' or 'skyscraper'")
        job.sheaves[name] = VirtualSheaf(f, tuple(terms))

    for name, spec in (data.get("motives") or {}).items():
        where = f"motives.{name}"
        f = need_field(where)
        rows = _need(spec, "map", where)
        motive = OneMotive.parse(f, rows)
        if "x_rank" in spec and spec["x_rank"] != motive.k:
            raise ValidationError(f"{where}: x_rank disagrees with the map")
        if "torus_rank" in spec and motive.k and spec["torus_rank"] != motive.d:
            raise ValidationError(f"{where}: torus_rank disagrees with the map")
        if not motive.k and "torus_rank" in spec:
            motive = OneMotive(f, 0, _as_int(spec["torus_rank"], where), ())
        job.motives[name] = motive

    for i, cmd in enumerate(data.get("commands") or []):
        where = f"commands[{i}]"
        target = _need(cmd, "target", where)
        op = _need(cmd, "op", where)
        options = cmd.get("options", {}) or {}
        if job.kind_of(target) is None:
            raise ValidationError(f"{where}: unknown target {target!r}")
        if op not in OPS[job.kind_of(target)]:
            raise ValidationError(f"{where}: operation {op!r} does not apply to {target!r}")
        job.commands.append(Command(target, op, dict(options)))
    return job


def _build_torus(job, spec, fam, where, need_field, cover_ref):
    f = need_field(where)
    supplied = None
    if "class_data" in spec:
        cd = spec["class_data"]
        supplied = ClassData(
            _as_int(_need(cd, "cl_tor", where), where),
            _as_int(_need(cd, "disc", where), where),
            _as_int(_need(cd, "units", where), where),
        )
    if fam == "split":
        torus = split_torus(f, _as_int(spec.get("d", 1), where))
    elif fam == "norm_one_constant":
        torus = norm_one_torus(AbelianCover(f, _as_int(_need(spec, "n", where), where)))
    elif fam == "induced_constant":
        torus = induced_torus(AbelianCover(f, _as_int(_need(spec, "n", where), where)))
    elif fam == "norm_one":
        torus = norm_one_torus(cover_ref(_need(spec, "cover", where), where))
    elif fam == "induced":
        torus = induced_torus(cover_ref(_need(spec, "cover", where), where))
    elif fam == "custom":
        lref = _need(spec, "lattice", where)
        if not isinstance(lref, str) or lref not in job.lattices:
            raise ValidationError(f"{where}: unknown lattice {lref!r}")
        return custom_torus(cover_ref(_need(spec, "cover", where), where), job.lattices[lref], supplied)
    elif fam == "product":
        names = _need(spec, "factors", where)
        known = isinstance(names, list) and all(isinstance(n, str) and n in job.tori for n in names)
        if not known or len(names) < 2:
            raise ValidationError(f"{where}: product needs at least two known tori")
        torus = job.tori[names[0]]
        for n in names[1:]:
            torus = product_torus(torus, job.tori[n])
    else:
        raise ValidationError(f"{where}: unknown torus family {fam!r}")
    if supplied is not None:
        from dataclasses import replace

        torus = replace(torus, supplied=supplied)
    return torus


# ---------------------------------------------------------------------------
# output helpers


def _frac(x):
    return format_fraction(Fraction(x))


def _rf(f: RationalFunctionQ):
    return f.to_json() | {"text": str(f)}


def _group(g):
    return g.to_json()


# ---------------------------------------------------------------------------
# operations: each returns (outputs, verdict, routes)


def _places_op(job, _, opts):
    f = get_field(_as_int(opts.get("q", job.q), "options.q"))
    n = _as_int(opts.get("max_degree", 2), "options.max_degree")
    places = list(enumerate_places(f, n))
    counts = {}
    for v in places:
        if v.poly is not None:
            counts[v.degree] = counts.get(v.degree, 0) + 1
    listed = [{"place": v.to_json(), "degree": v.degree, "text": v.label(f)} for v in places] if opts.get("list", True) else []
    finite = [counts.get(d, 0) for d in range(1, n + 1)]
    return {"finite_counts": finite, "infinite_places": 1, "places": listed}, "ok", {}


def _ono_op(job, _, opts):
    qs = opts.get("qs", [2, 3, 5])
    ns = opts.get("ns", [2, 3, 4])
    rows = ono_table(qs, ns)
    table = [[q, n, _frac(a), _frac(b), v] for q, n, a, b, v in rows]
    verdict = "pass" if all(r[4] == "pass" for r in rows) else "fail"
    return {"table": {"columns": ONO_COLUMNS, "rows": table}}, verdict, {"sha_route": "lattice_kernel"}


def _cover_op(job, cover, op, opts):
    f = cover.field
    if op == "genus":
        return {"genus": genus_of_cover(cover)}, "ok", {}
    if op == "constant_field":
        return {"constant_field_degree": constant_field_of_cover(cover)}, "ok", {}
    if op == "ramification":
        rows = [decomposition(cover, v).to_json() | {"text": v.label(f)} for v in cover.ramified_places]
        return {"ramified": rows}, "ok", {}
    if op == "decomposition":
        n = _as_int(opts.get("max_degree", 1), "options.max_degree")
        rows = [decomposition(cover, v).to_json() | {"text": v.label(f)} for v in enumerate_places(f, n)]
        return {"places": rows}, "ok", {}
    if op == "zeta":
        z = zeta_of_cover(cover)
        return {"zeta": _rf(z), "genus": genus_of_cover(cover)}, "ok", {}
    raise AssertionError(op)


def _lattice_op(job, lat, op, opts):
    if op == "h1":
        return {"h1": _group(group_h1(lat))}, "ok", {}
    if op == "invariants":
        return {"basis": invariants(lat)}, "ok", {}
    if op == "coinvariants":
        return {"coinvariants": _group(coinvariants(lat))}, "ok", {}
    if op == "tate":
        g = tuple(opts.get("generator", [int(i == len(lat.orders) - 1) for i in range(len(lat.orders))]))
        return tate_cohomology_cyclic(lat, g).to_json(), "ok", {}
    if op in ("sha", "conductor"):
        cover = job.covers.get(opts.get("cover"))
        if cover is None:
            raise ValidationError(f"operation {op} needs options.cover naming a cover")
        if op == "sha":
            return {"sha": _group(sha_kernel(cover, lat))}, "ok", {"sha_route": "lattice_kernel"}
        return artin_conductor(cover, lat).to_json(), "ok", {}
    raise AssertionError(op)


def _sheaf_op(job, z, op, opts):
    if op == "lfun":
        return {"l": _rf(l_function(z))}, "ok", {}
    if op == "truncated":
        depth = _as_int(opts.get("depth", 6), "options.depth")
        s = l_truncated(z, depth)
        return {"series": [_frac(c) for c in s.coeffs]}, "ok", {}
    if op == "r":
        return {"r": r_of(z)}, "ok", {}
    if op == "chi_w":
        rep = chi_w_virtual(z)
        return rep.to_json(), "ok", {"route": rep.route}
    if op == "verify":
        rep = verify_theorem_constructible(z)
        return rep.to_json(), "pass", {"terms": rep.labels["terms"]}
    raise AssertionError(op)


def _torus_op(job, t, op, opts):
    q = t.field.q
    if op == "lfun":
        return {"l": _rf(l_torus(t))}, "ok", {}
    if op == "rho":
        return {"rho_t": _frac(rho_t(t)), "rank": t.rank}, "ok", {}
    if op == "chi_w":
        c = chi_w_torus(t)
        return c.to_json(), "pass" if c.consistent else "fail", {"route": "LeadingCoefficient"}
    if op == "class_data":
        return class_data(t).to_json(), "ok", {}
    if op == "h1":
        return {"h1": _group(h1_ky(t))}, "ok", {}
    if op == "sha":
        return {"sha": _group(sha_of_torus(t))}, "ok", {"sha_route": "lattice_kernel"}
    if op == "functional_equation":
        fe = check_functional_equation(t)
        return fe.to_json(), "pass", {}
    if op == "verify":
        rep = verify_torus_theorem(t)
        return rep.to_json(), "pass", dict(rep.labels)
    if op == "tamagawa":
        return {"tau_ono": _frac(tamagawa_ono(t))}, "ok", {"sha_route": "lattice_kernel"}
    if op == "verify_ono":
        rep = verify_ono(t)
        return rep.to_json(), "pass", dict(rep.labels)
    raise AssertionError(op)


def _motive_op(job, m, op, opts):
    if op == "x_delta":
        data = x_delta(m)
        return {"places": [p.to_json() for p in data.places]}, "ok", {}
    if op == "r":
        return {"r_m": r_m(m)}, "ok", {}
    if op == "lfun":
        return {"l": _rf(l_motive(m))}, "ok", {}
    if op == "chi_w":
        return {"chi_w": _frac(chi_w_motive(m))}, "ok", {"route": "FrobComplex"}
    if op == "verify":
        rep = verify_theorem_main(m)
        return rep.to_json(), "pass", dict(rep.labels)
    raise AssertionError(op)


OPS = {
    "places": {"enumerate"},
    "ono_table": {"table"},
    "covers": {"genus", "constant_field", "ramification", "decomposition", "zeta"},
    "lattices": {"h1", "invariants", "coinvariants", "tate", "sha", "conductor"},
    "sheaves": {"lfun", "truncated", "r", "chi_w", "verify"},
    "tori": {"lfun", "rho", "chi_w", "class_data", "h1", "sha", "functional_equation", "verify", "tamagawa", "verify_ono"},
    "motives": {"x_delta", "r", "lfun", "chi_w", "verify"},
}

VERIFYING_OPS = {"verify", "verify_ono", "functional_equation", "table", "chi_w"}


def _dispatch(job, cmd):
    kind = job.kind_of(cmd.target)
    if kind == "places":
        return _places_op(job, cmd.op, cmd.options)
    if kind == "ono_table":
        return _ono_op(job, cmd.op, cmd.options)
    obj = getattr(job, kind)[cmd.target]
    handler = {
        "covers": _cover_op,
        "lattices": _lattice_op,
        "sheaves": _sheaf_op,
        "tori": _torus_op,
        "motives": _motive_op,
    }[kind]
    return handler(job, obj, cmd.op, cmd.options)


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    schema_version: int
    q: int | None
    results: list = field(default_factory=list)

    def to_json(self, timing=True):
        results = []
        for r in self.results:
            r = dict(r)
            if not timing:
                r.pop("timing_ms", None)
            results.append(r)
        return {"schema_version": self.schema_version, "q": self.q, "results": results}

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        return cls(data["schema_version"], data["q"], list(data["results"]))

    @property
    def ok(self):
        return all(r["verdict"] in ("pass", "ok") for r in self.results)


def _jsonable(x):
    # normalise tuples and Fractions so reports compare equal after a round trip
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _headline(outputs):
    # promote the leading-value check (or the last check) to top-level lhs/rhs
    checks = outputs.get("checks")
    if checks and "lhs" not in outputs:
        main = next((c for c in checks if c["name"] == "leading value"), checks[-1])
        outputs["lhs"], outputs["rhs"] = main["lhs"], main["rhs"]


def run(job: JobSpec, threads=None, max_depth=None, select=None) -> Report:
    """Execute the job's commands in order; ``select`` filters (kind, op) pairs."""
    report = Report(job.schema_version, job.q)
    depth = max_depth if max_depth is not None else job.max_depth
    nthreads = threads if threads is not None else job.threads
    with configured(max_depth=depth, threads=nthreads):
        for cmd in job.commands:
            if select is not None and not select(job.kind_of(cmd.target), cmd.op):
                continue
            start = time.perf_counter()
            entry = {"target": cmd.target, "op": cmd.op, "options": _jsonable(cmd.options)}
            try:
                outputs, verdict, routes = _dispatch(job, cmd)
                _headline(outputs)
                entry.update(outputs=_jsonable(outputs), verdict=verdict, routes=_jsonable(routes))
            except VerificationFailed as exc:
                outputs = exc.report.to_json() if exc.report is not None else {}
                outputs.update(lhs=_jsonable(exc.lhs), rhs=_jsonable(exc.rhs))
                outputs["checks"] = outputs.get("checks", [])
                entry.update(outputs=_jsonable(outputs), verdict="fail", routes={}, error=str(exc))
            except (FFWeilError, ValueError, ArithmeticError) as exc:
                entry.update(outputs={}, verdict="error", routes={}, error=f"{type(exc).__name__}: {exc}")
            entry["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
            report.results.append(entry)
    return report


def canonical_json(report: Report, timing=False) -> str:
    return json.dumps(report.to_json(timing=timing), sort_keys=True, separators=(",", ":"))


def _tabular(report):
    tables = [r["outputs"]["table"] for r in report.results if "table" in r.get("outputs", {})]
    if len(tables) != 1 or len(report.results) != 1:
        raise FormatUnsupported("csv output needs a report with exactly one tabular command")
    return tables[0]


def emit(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n").encode()
    if fmt == "csv":
        table = _tabular(report)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table["columns"])
        writer.writerows(table["rows"])
        return buf.getvalue().encode()
    if fmt == "text":
        return _text(report).encode()
    raise FormatUnsupported(f"unknown format {fmt!r}")


def _text(report):
    lines = [f"q = {report.q}" if report.q is not None else "q unspecified"]
    for r in report.results:
        lines.append(f"[{r['verdict']}] {r['target']} {r['op']}")
        out = r.get("outputs", {})
        for c in out.get("checks", []):
            mark = "ok" if c["ok"] else "MISMATCH"
            lines.append(f"    {c['name']}: {c['lhs']} vs {c['rhs']} ({mark})")
        if "error" in r:
            lines.append(f"    {r['error']}")
        if "table" in out:
            lines.append("    " + ",".join(out["table"]["columns"]))
            lines.extend("    " + ",".join(str(x) for x in row) for row in out["table"]["rows"])
        for key, val in sorted(out.items()):
            if key in ("checks", "table", "labels", "passed", "name"):
                continue
            if isinstance(val, dict) and "text" in val:
                val = val["text"]
            lines.append(f"    {key}: {val}")
    return "\n".join(lines) + "\n"
