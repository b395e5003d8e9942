"""Execute a parsed session and render its records."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..gradedmod import GradedModule, minimalize
from ..homalg import depth, ext_table, p_index, q_index, tor_table
from ..reducible import check_certificate, mcm_approximation, search_certificate
from ..resolve import detect_period, estimate_complexity, resolution
from ..ringkernel import QuotientRing
from ..yoneda import ext_class_basis, pushout
from .cache import DiskCache, content_key
from .parser import Config, ModuleDecl, RingDecl, Session, eval_expr, print_statement

SCHEMA_VERSION = 1


class CommandError(RuntimeError):
    def __init__(self, command, exc):
        super().__init__(f"line {command.line}, column {command.col}: "
                         f"{print_statement(command)} failed: {exc}")
        self.command = command
        self.cause = exc


@dataclass
class ResultRecord:
    command: str
    payload: dict
    provenance: dict
    cache_hit: bool = field(default=False, compare=False)

    def to_json(self):
        # cache_hit is deliberately left out so warm and cold runs serialize identically
        return {"command": self.command, "payload": self.payload, "provenance": self.provenance}

    @classmethod
    def from_json(cls, data):
        return cls(data["command"], data["payload"], data["provenance"])


def _build(session: Session):
    cfg = session.config
    rings: dict = {}
    modules: dict = {}
    for d in session.declarations:
        if isinstance(d, RingDecl):
            ideal = [eval_expr(e, d.variables, d.p) for e in d.ideal]
            rings[d.name] = QuotientRing(d.p, list(d.variables), ideal,
                                         max_degree=cfg.max_degree)
        elif isinstance(d, ModuleDecl):
            R = rings[d.ring]
            rows = [[eval_expr(e, R.varnames, R.p) for e in r] for r in d.rows]
            modules[d.name] = GradedModule.from_matrix(R, rows)
    return rings, modules


def _lookup(name, rings, modules):
    if name in modules:
        return modules[name]
    if name in rings:
        return GradedModule.free(rings[name], (0,))
    raise KeyError(name)


def _betti_payload(res, H):
    B = res.betti_table(H)
    # the default window (H/2, H) needs at least four Betti numbers
    cx = estimate_complexity(B) if H - H // 2 + 1 >= 4 else None
    return {"betti": list(B.betti), "graded_betti": B.to_json()["graded"],
            "complete": res.complete, "complexity": cx.to_json() if cx else None}


class Runner:
    def __init__(self, config: Config):
        self.config = config
        self.cache = DiskCache(config.cache_dir) if config.cache_dir else None
        self.hdeg: dict = {}

    def provenance(self, truncated: bool, H: int) -> dict:
        c = self.config
        return {"schema_version": SCHEMA_VERSION, "D": c.max_degree, "H": H,
                "seed": c.seed, "truncated": truncated}

    def _key(self, cmd, mods, H):
        return content_key({
            "kind": "result", "command": cmd.name, "args": [a for a in cmd.args
                                                            if not isinstance(a, str)],
            "modules": [m.signature() for m in mods], "H": H, "D": self.config.max_degree,
            "seed": self.config.seed,
        })

    def execute(self, cmd, rings, modules) -> ResultRecord:
        names = [a for a in cmd.args if isinstance(a, str)]
        mods = [_lookup(n, rings, modules) for n in names]
        H = self.config.max_hdeg
        if cmd.name == "resolve":
            H = cmd.args[1]
            self.hdeg[names[0]] = H
        elif cmd.name == "betti":
            H = self.hdeg.get(names[0], H)
        truncated = any(not m.ring.is_artinian for m in mods)
        key = self._key(cmd, mods, H)
        if self.cache is not None:
            hit = self.cache.get_raw(key)
            if hit is not None:
                return ResultRecord(print_statement(cmd), hit, self.provenance(truncated, H), True)
        payload = self.compute(cmd, mods, H)
        if self.cache is not None:
            self.cache.put_raw(key, payload)
        return ResultRecord(print_statement(cmd), payload, self.provenance(truncated, H))

    def compute(self, cmd, mods, H) -> dict:
        cache = self.cache
        seed = self.config.seed
        M = minimalize(mods[0])
        if cmd.name in ("resolve", "betti"):
            res = resolution(M, H, cache)
            out = _betti_payload(res, H)
            if cmd.name == "resolve":
                out["differentials"] = [d.pretty() for d in res.diffs]
            return out
        if cmd.name == "ext":
            T = ext_table(M, mods[1], H, cache)
            return {"table": T.to_json(), "p_index": p_index(M, mods[1], H, T, cache).to_json()}
        if cmd.name == "tor":
            T = tor_table(M, mods[1], H, cache)
            return {"table": T.to_json(), "q_index": q_index(M, mods[1], H, T, cache).to_json()}
        if cmd.name == "depth":
            return depth(M, cache).to_json()
        if cmd.name == "period":
            r = detect_period(M, H, seed=seed)
            return {"period": None if r is None else r[0], "shift": None if r is None else r[1],
                    "max_period": H}
        if cmd.name == "pushout":
            n, j = cmd.args[1], cmd.args[2] or 0
            basis = ext_class_basis(M, n, cache=cache)
            if j >= len(basis):
                raise ValueError(f"Ext^{n} has only {len(basis)} basis classes")
            eta = basis[j]
            P = pushout(eta)
            out = P.to_json()
            out.update(n=n, class_index=j, class_degree=eta.degree, basis_size=len(basis),
                       K_hilbert=list(P.K.hilbert_function().coeffs),
                       K_betti=list(resolution(P.K, H, cache).betti_table(H).betti))
            return out
        if cmd.name == "certify":
            cert = search_certificate(M, H=H, seed=seed, cache=cache)
            if cert is None:
                return {"found": False}
            v = check_certificate(M, cert, cache=cache)
            return {"found": True, "length": cert.length, "certificate": cert.to_json(),
                    "verdict": v.to_json(),
                    "K_ranks": [K.num_generators for K in cert.modules()],
                    "K_free": [not K.rel_shifts for K in cert.modules()]}
        if cmd.name == "mcm":
            r = mcm_approximation(M, H, seed=seed, cache=cache)
            return r.to_json()
        raise ValueError(f"unknown command {cmd.name!r}")


def run(session: Session) -> list:
    """Execute every command in order; errors carry the command's location."""
    rings, modules = _build(session)
    runner = Runner(session.config)
    out = []
    for cmd in session.commands:
        try:
            out.append(runner.execute(cmd, rings, modules))
        except (ValueError, RuntimeError, KeyError) as exc:
            raise CommandError(cmd, exc) from exc
    return out


def to_json(records) -> str:
    return json.dumps([r.to_json() for r in records], sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"


def render_table(doc) -> str:
    """Human-readable rendering computed only from the JSON document."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    lines = []
    for rec in doc:
        lines.append(f"> {rec['command']}")
        pl = rec["payload"]
        if "betti" in pl:
            lines.append("  betti: " + " ".join(str(b) for b in pl["betti"]))
            if pl.get("complexity"):
                c = pl["complexity"]
                val = "unbounded" if c["value"] is None else c["value"]
                lines.append(f"  complexity: {val} ({c['method']}, window {c['window']}, "
                             f"confident={c['confident']})")
        elif "table" in pl:
            t = pl["table"]
            lines.append(f"  {t['kind']} totals: " + " ".join(str(x) for x in t["totals"]))
            idx = pl.get("p_index") or pl.get("q_index")
            v = f">= {idx['H']}" if idx["at_least_H"] else idx["value"]
            lines.append(f"  index: {v}")
        elif "found" in pl:
            if pl["found"]:
                cx = [c["value"] for c in pl["certificate"]["cx_trail"]]
                lines.append(f"  certificate of length {pl['length']}, cx trail {cx}, "
                             f"verdict: {pl['verdict']['reason']}")
            else:
                lines.append("  no certificate found")
        elif "period" in pl:
            lines.append(f"  period: {pl['period']} (shift {pl['shift']})")
        elif "K" in pl:
            lines.append(f"  K generators {pl['K_gens']}, betti {pl['K_betti']}, "
                         f"ses verified {pl['ses_verified']}")
        elif "depth" in pl:
            lines.append(f"  depth {pl['depth']}, dim {pl['dim']}, mcm {pl['is_mcm']}")
        elif "checks" in pl:
            lines.append(f"  ses checks {pl['checks']}, pd of left {pl['pd_witness']}, "
                         f"depth of middle {pl['mcm_depth']}")
        prov = rec["provenance"]
        lines.append(f"  [D={prov['D']} H={prov['H']} seed={prov['seed']}"
                     f"{' truncated' if prov['truncated'] else ''}]")
    return "\n".join(lines) + ("\n" if lines else "")
