"""Scenario files: strict schema, validation and execution into CSV artifacts.

A scenario is an INI file.  Every physical quantity carries its unit in the
key name (``stiffness_nm_per_rad``, ``timestep_s``); unknown keys are errors.
"""
from __future__ import annotations

import configparser
import csv
import hashlib
import json
import math
import os
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (FreqGrid, closed_loop_pcl, frequency_rmse_sweep, steady_window,
                       sweep_tuning, write_curves_csv)
from .control import (DFM, TFOB, Injection, LoopConfig, PdParams, Reference, Sensing, rmse,
                      run_closed_loop)
from .model import DivergenceError, SeaParams
from .sensing import (GAUSSIAN, QUANTIZE, EncoderModel, collect_error_stats,
                      default_backlash_halfwidth, dfm_estimate, quantize)

KINDS = ("step_tracking", "noise_regulation", "estimation_accuracy",
         "tuning_sweep", "frequency_sweep", "error_distribution")

OUTPUT_ENV = "SEAFORCE_OUTPUT_DIR"


class ScenarioError(ValueError):
    """Invalid scenario file; the message names the offending key path."""


@dataclass(frozen=True)
class Field:
    type: str
    default: object = None
    required: bool = False
    choices: tuple = ()
    doc: str = ""


def _f(default=None, doc="", **kw):
    return Field("float", default, doc=doc, **kw)


COMMON = {
    "scenario": {
        "name": Field("str", required=True, doc="scenario label"),
        "kind": Field("choice", required=True, choices=KINDS, doc="what to run"),
        "seed": Field("int", 0, doc="root seed of every noise stream"),
        "output_dir": Field("str", None, doc=f"output directory (default ${OUTPUT_ENV} or ./out/<name>)"),
    },
    "plant": {
        "motor_inertia_kg_m2": _f(0.0000625),
        "motor_damping_nms_per_rad": _f(0.0001023),
        "load_inertia_kg_m2": _f(0.216),
        "load_damping_nms_per_rad": _f(0.0005),
        "stiffness_nm_per_rad": _f(4950.0),
        "nominal_stiffness_nm_per_rad": _f(None, "defaults to the true stiffness"),
        "gear_ratio": _f(100.0),
        "motor_values_on_motor_shaft": Field("bool", True, doc="reflect motor inertia/damping by gear_ratio^2"),
        "timestep_s": _f(1e-4),
        "load_mode": Field("choice", "blocked", choices=("free", "blocked")),
    },
    "motor_encoder": {
        "counts_per_turn": Field("int", 2000),
        "quadrature_multiplier": Field("int", 4),
        "on_motor_shaft": Field("bool", True, doc="encoder ahead of the gearbox (step divided by gear_ratio)"),
        "gaussian_sigma_rad": Field("sigma", 0.0, doc="number or 'equivalent' (step/sqrt(12))"),
        "effects": Field("effects", ("quantize",), doc="subset of quantize, gaussian; empty = perfect"),
    },
    "spring_encoder": {
        "bits": Field("int", 19),
        "gaussian_sigma_rad": Field("sigma", 0.0, doc="number or 'equivalent' (step/sqrt(12))"),
        "effects": Field("effects", ("quantize",), doc="subset of quantize, gaussian; empty = perfect"),
    },
    "spring": {
        "backlash_enabled": Field("bool", True),
        "backlash_halfwidth_rad": Field("sigma", None, doc="default 2 N*m / nominal stiffness"),
    },
    "controller": {
        "proportional_gain": _f(1.0),
        "derivative_gain_s": _f(0.014),
        "derivative_cutoff_hz": _f(100.0),
        "torque_limit_nm": _f(None, "symmetric actuator limit, none by default"),
    },
    "observer": {
        "q_bandwidths_hz": Field("floats", (0.1, 1.0, 5.0, 10.0)),
        "nominal_inertia_scale": _f(1.0),
        "nominal_damping_scale": _f(1.0),
    },
}

KIND_FIELDS = {
    "step_tracking": {
        "amplitude_nm": _f(6.0),
        "start_s": _f(1.0),
        "stop_s": _f(6.0),
        "duration_s": _f(7.0),
        "steady_start_s": _f(4.0, "start of the steady-state averaging window (ends at stop_s)"),
        "feedback": Field("feedbacks", (DFM, TFOB)),
    },
    "noise_regulation": {
        "spring_step_rad": _f(0.0005),
        "motor_step_rad": _f(0.0),
        "start_s": _f(1.0),
        "stop_s": _f(5.0),
        "duration_s": _f(6.0),
        "feedback": Field("feedbacks", (DFM, TFOB)),
    },
    "estimation_accuracy": {
        "amplitude_nm": _f(6.0),
        "frequency_hz": _f(0.5),
        "settle_s": _f(2.0),
        "window_s": _f(8.0, "minimum length of the RMSE window (whole periods)"),
        "scatter_decimation": Field("int", 10, doc="keep every n-th logged sample in scatter files"),
    },
    "tuning_sweep": {
        "q_min_hz": _f(0.05),
        "q_max_hz": _f(50.0),
        "q_points": Field("int", 61),
        "h_values": Field("floats", (2.621,)),
        "band_min_hz": _f(0.01, "lower edge of the band the norms are taken over"),
        "band_max_hz": _f(100.0, "upper edge of the band the norms are taken over"),
        "points_per_decade": Field("int", 50),
    },
    "frequency_sweep": {
        "frequencies_hz": Field("floats", (0.2, 0.5, 1.0, 2.0, 5.0)),
        "amplitude_nm": _f(3.0),
        "settle_s": _f(2.0),
    },
    "error_distribution": {
        "stiffnesses_nm_per_rad": Field("floats", (60.0, 2500.0, 9100.0)),
        "torque_amplitudes_nm": Field("floats", (1.0, 2.0, 3.0)),
        "frequencies_hz": Field("floats", (0.5, 1.0, 2.0)),
        "sample_rate_hz": _f(1000.0),
        "duration_s": _f(10.0),
        "bins": Field("int", 50),
    },
}


def _parse_value(fld, raw, path):
    raw = raw.strip()
    try:
        if raw.lower() in ("none", "") and fld.type not in ("effects", "str"):
            if fld.required:
                raise ScenarioError(f"{path}: value required")
            return None
        if fld.type == "float":
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError
            return v
        if fld.type == "int":
            return int(raw)
        if fld.type == "bool":
            low = raw.lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError
        if fld.type == "choice":
            if raw not in fld.choices:
                raise ScenarioError(f"{path}: {raw!r} not one of {', '.join(fld.choices)}")
            return raw
        if fld.type == "str":
            return raw
        if fld.type == "sigma":
            if raw.lower() == "equivalent":
                return "equivalent"
            v = float(raw)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError
            return v
        items = [x.strip() for x in raw.split(",") if x.strip()]
        if fld.type == "floats":
            vals = tuple(float(x) for x in items)
            if not vals or not all(math.isfinite(v) for v in vals):
                raise ValueError
            return vals
        if fld.type == "effects":
            if items in ([], ["none"]):
                return ()
            bad = set(items) - {QUANTIZE, GAUSSIAN}
            if bad:
                raise ScenarioError(f"{path}: unknown effects {sorted(bad)}")
            return tuple(items)
        if fld.type == "feedbacks":
            bad = set(items) - {DFM, TFOB}
            if not items or bad:
                raise ScenarioError(f"{path}: feedback must be a list of DFM, TFOB")
            return tuple(items)
    except ScenarioError:
        raise
    except ValueError:
        raise ScenarioError(f"{path}: cannot parse {raw!r} as {fld.type}") from None
    raise AssertionError(fld.type)


def _unknown_key_error(section, key, fields_):
    path = f"{section}.{key}"
    near = [k for k in fields_ if k.startswith(key + "_")]
    if near:
        return ScenarioError(f"{path}: missing unit suffix (expected {near[0]!r})")
    return ScenarioError(f"{path}: unknown key")


def schema_for(kind):
    if kind not in KINDS:
        raise ScenarioError(f"unknown scenario kind {kind!r}")
    return {**COMMON, kind: KIND_FIELDS[kind]}


@dataclass
class Scenario:
    name: str
    kind: str
    seed: int
    output_dir: str
    values: dict
    source: str | None = None

    def section(self, name):
        return self.values[name]

    def with_overrides(self, seed=None, output_dir=None):
        vals = json.loads(json.dumps(self.values))
        if seed is not None:
            vals["scenario"]["seed"] = int(seed)
        if output_dir is not None:
            vals["scenario"]["output_dir"] = str(output_dir)
        return Scenario(self.name, self.kind, vals["scenario"]["seed"],
                        vals["scenario"]["output_dir"], vals, self.source)

    def config_hash(self):
        """Hash of the physical configuration; seed and output location excluded."""
        vals = {s: dict(v) for s, v in self.values.items()}
        vals["scenario"] = {k: v for k, v in vals["scenario"].items() if k not in ("seed", "output_dir")}
        blob = json.dumps(vals, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    # builders -------------------------------------------------------------
    def params(self, K_s=None):
        p = self.values["plant"]
        stiff = p["stiffness_nm_per_rad"] if K_s is None else K_s
        nominal = p["nominal_stiffness_nm_per_rad"] if K_s is None else None
        common = dict(J_l=p["load_inertia_kg_m2"], B_l=p["load_damping_nms_per_rad"], K_s=stiff,
                      K_s_nominal=nominal, dt=p["timestep_s"], load_mode=p["load_mode"])
        if p["motor_values_on_motor_shaft"]:
            return SeaParams.from_motor_side(p["motor_inertia_kg_m2"], p["motor_damping_nms_per_rad"],
                                             N_gear=p["gear_ratio"], **common)
        return SeaParams(J_m=p["motor_inertia_kg_m2"], B_m=p["motor_damping_nms_per_rad"],
                         N_gear=p["gear_ratio"], **common)

    def motor_encoder(self):
        e = self.values["motor_encoder"]
        red = self.values["plant"]["gear_ratio"] if e["on_motor_shaft"] else 1.0
        return _encoder(dict(counts_per_turn=e["counts_per_turn"],
                             quadrature_multiplier=e["quadrature_multiplier"], reduction=red),
                        e["gaussian_sigma_rad"], e["effects"])

    def spring_encoder(self):
        e = self.values["spring_encoder"]
        return _encoder(dict(bits=e["bits"]), e["gaussian_sigma_rad"], e["effects"])

    def backlash_halfwidth(self, K_s_nominal):
        s = self.values["spring"]
        if not s["backlash_enabled"]:
            return 0.0
        h = s["backlash_halfwidth_rad"]
        return default_backlash_halfwidth(K_s_nominal) if h is None else h

    def sensing(self, params):
        return Sensing(self.motor_encoder(), self.spring_encoder(),
                       self.backlash_halfwidth(params.K_s_nominal))

    def pd(self):
        c = self.values["controller"]
        return PdParams(c["proportional_gain"], c["derivative_gain_s"],
                        2 * math.pi * c["derivative_cutoff_hz"])

    def loop(self, **kw):
        c = self.values["controller"]
        o = self.values["observer"]
        p = self.params()
        return LoopConfig(torque_limit=c["torque_limit_nm"], seed=self.seed,
                          J_nominal=p.J_m * o["nominal_inertia_scale"],
                          B_nominal=p.B_m * o["nominal_damping_scale"], **kw)


def _encoder(kw, sigma, effects):
    if not effects:
        return None
    probe = EncoderModel(**kw)
    sig = probe.equivalent_sigma if sigma == "equivalent" else float(sigma)
    return EncoderModel(**kw, gaussian_sigma=sig, effects=frozenset(effects))


def parse_scenario_text(text, source=None):
    cp = configparser.ConfigParser(interpolation=None, default_section="__none__")
    cp.optionxform = str
    try:
        cp.read_string(text, source=source or "<string>")
    except configparser.Error as exc:
        raise ScenarioError(f"malformed scenario file: {exc}") from None
    if not cp.has_section("scenario") or not cp.has_option("scenario", "kind"):
        raise ScenarioError("scenario.kind: required key missing")
    kind = cp.get("scenario", "kind").strip()
    if kind not in KINDS:
        raise ScenarioError(f"scenario.kind: {kind!r} not one of {', '.join(KINDS)}")
    schema = schema_for(kind)
    for section in cp.sections():
        if section not in schema:
            raise ScenarioError(f"{section}: unknown section for kind {kind!r}")
        for key in cp[section]:
            if key not in schema[section]:
                raise _unknown_key_error(section, key, schema[section])
    values = {}
    for section, fields_ in schema.items():
        out = {}
        for key, fld in fields_.items():
            path = f"{section}.{key}"
            if cp.has_option(section, key):
                out[key] = _parse_value(fld, cp.get(section, key), path)
            elif fld.required:
                raise ScenarioError(f"{path}: required key missing")
            else:
                out[key] = fld.default
        values[section] = out
    sc = values["scenario"]
    if sc["output_dir"] is None:
        sc["output_dir"] = os.path.join(os.environ.get(OUTPUT_ENV, "out"), sc["name"])
    scn = Scenario(sc["name"], kind, sc["seed"], sc["output_dir"], values, source)
    _validate(scn)
    return scn


def parse_scenario(path):
    path = Path(path)
    if not path.is_file():
        raise ScenarioError(f"scenario file not found: {path}")
    return parse_scenario_text(path.read_text(encoding="utf-8"), str(path))


def _validate(scn):
    """Cross-field checks, run before anything is simulated."""
    try:
        params = scn.params()
        scn.motor_encoder()
        scn.spring_encoder()
        scn.pd()
    except ValueError as exc:
        raise ScenarioError(f"invalid physical parameters: {exc}") from None
    k = scn.values[scn.kind]
    if scn.kind in ("step_tracking", "noise_regulation"):
        if not 0 <= k["start_s"] < k["stop_s"] <= k["duration_s"]:
            raise ScenarioError(f"{scn.kind}: need 0 <= start_s < stop_s <= duration_s")
    if scn.kind == "step_tracking" and not k["start_s"] <= k["steady_start_s"] < k["stop_s"]:
        raise ScenarioError("step_tracking.steady_start_s: must lie in [start_s, stop_s)")
    if scn.kind == "tuning_sweep":
        if not 0 < k["q_min_hz"] < k["q_max_hz"] or k["q_points"] < 3:
            raise ScenarioError("tuning_sweep: need 0 < q_min_hz < q_max_hz and q_points >= 3")
        FreqGrid.from_hz(k["band_min_hz"], k["band_max_hz"], k["points_per_decade"])
    if scn.kind in ("frequency_sweep", "estimation_accuracy"):
        freqs = k.get("frequencies_hz") or (k["frequency_hz"],)
        if any(not 0 < f < 0.5 / params.dt for f in freqs):
            raise ScenarioError(f"{scn.kind}: frequencies must lie in (0, Nyquist)")
    if any(q < 0 for q in scn.values["observer"]["q_bandwidths_hz"]):
        raise ScenarioError("observer.q_bandwidths_hz: must be >= 0")


# execution ----------------------------------------------------------------

@dataclass
class RunManifest:
    config_hash: str
    version: str
    seed: int
    wall_time_s: float = 0.0
    files: list = field(default_factory=list)
    status: str = "ok"
    failure: dict | None = None
    scenario: str = ""
    kind: str = ""

    def to_json(self):
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


class _Writer:
    def __init__(self, out_dir, manifest):
        self.out = Path(out_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        self.manifest = manifest

    def rows(self, name, header, rows):
        with open(self.out / name, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for r in rows:
                w.writerow([_fmt(v) for v in r])
        self.manifest.files.append(name)

    def run(self, name, result):
        result.to_csv(self.out / name)
        self.manifest.files.append(name)

    def curves(self, name, grid_name, grid, curves):
        write_curves_csv(self.out / name, grid_name, grid, curves)
        self.manifest.files.append(name)


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def _tag(fb, q):
    return "dfm" if fb == DFM else f"tfob_q{q:g}hz"


def _feedback_runs(scn):
    out = []
    for fb in scn.values[scn.kind]["feedback"]:
        if fb == DFM:
            out.append((DFM, scn.values["observer"]["q_bandwidths_hz"][0]))
        else:
            out.extend((TFOB, q) for q in scn.values["observer"]["q_bandwidths_hz"])
    return out


def _run_step_tracking(scn, w):
    k = scn.values["step_tracking"]
    p, pd = scn.params(), scn.pd()
    sensing = scn.sensing(p)
    ref = Reference("step", k["amplitude_nm"], start=k["start_s"], stop=k["stop_s"])
    ideal = k["amplitude_nm"] * closed_loop_pcl(0.0, p, pd).real
    summary = []
    for fb, q in _feedback_runs(scn):
        run = run_closed_loop(scn.loop(feedback=fb, reference=ref, duration=k["duration_s"],
                                       q_bandwidth_hz=q), p, sensing, pd)
        w.run(f"step_{_tag(fb, q)}.csv", run)
        m = (run.time >= k["steady_start_s"]) & (run.time < k["stop_s"])
        tau = float(np.mean(run["tau_s_true"][m]))
        summary.append((fb, q if fb == TFOB else "", tau, ideal, tau - ideal, k["amplitude_nm"] - tau))
    w.rows("step_summary.csv", ("controller", "q_bandwidth_hz", "steady_torque_nm", "ideal_torque_nm",
                                "steady_state_error_nm", "tracking_error_nm"), summary)


def _run_noise_regulation(scn, w):
    k = scn.values["noise_regulation"]
    p, pd = scn.params(), scn.pd()
    sensing = scn.sensing(p)
    inj = []
    if k["spring_step_rad"]:
        inj.append(Injection("spring", "step", k["spring_step_rad"], start=k["start_s"], stop=k["stop_s"]))
    if k["motor_step_rad"]:
        inj.append(Injection("motor", "step", k["motor_step_rad"], start=k["start_s"], stop=k["stop_s"]))
    dc = abs(closed_loop_pcl(0.0, p, pd)) * p.K_s * k["spring_step_rad"]
    summary = []
    for fb, q in _feedback_runs(scn):
        run = run_closed_loop(scn.loop(feedback=fb, duration=k["duration_s"], q_bandwidth_hz=q,
                                       injections=tuple(inj)), p, sensing, pd)
        w.run(f"regulation_{_tag(fb, q)}.csv", run)
        window = (k["start_s"], k["duration_s"])
        summary.append((fb, q if fb == TFOB else "", rmse(run, "tau_s_true", 0.0, window), dc))
    w.rows("rmse_summary.csv", ("controller", "q_bandwidth_hz", "regulation_rmse_nm",
                                "dfm_dc_deviation_nm"), summary)


def _run_estimation_accuracy(scn, w):
    k = scn.values["estimation_accuracy"]
    p, pd = scn.params(), scn.pd()
    sensing = scn.sensing(p)
    ref = Reference("sine", k["amplitude_nm"], k["frequency_hz"], 0.0)
    window = steady_window(k["frequency_hz"], k["settle_s"], k["window_s"])
    table = []
    for q in scn.values["observer"]["q_bandwidths_hz"]:
        run = run_closed_loop(scn.loop(feedback=TFOB, reference=ref, duration=window[1],
                                       q_bandwidth_hz=q), p, sensing, pd)
        table.append((q, rmse(run, "tau_hat_tfob", "tau_s_true", window),
                      rmse(run, "tau_hat_dfm", "tau_s_true", window)))
        m = np.flatnonzero(run.time >= window[0])[::k["scatter_decimation"]]
        w.rows(f"scatter_q{q:g}hz.csv", ("time_s", "tau_s_true", "tau_hat_dfm", "tau_hat_tfob"),
               zip(run.time[m], run["tau_s_true"][m], run["tau_hat_dfm"][m], run["tau_hat_tfob"][m]))
    w.rows("rmse_by_bandwidth.csv", ("q_bandwidth_hz", "tfob_rmse_nm", "dfm_rmse_nm"), table)


def _run_tuning_sweep(scn, w):
    k = scn.values["tuning_sweep"]
    p = scn.params()
    grid = FreqGrid.from_hz(k["band_min_hz"], k["band_max_hz"], k["points_per_decade"])
    q = np.logspace(math.log10(k["q_min_hz"]), math.log10(k["q_max_hz"]), k["q_points"])
    curves = sweep_tuning(q, k["h_values"], p, grid)
    cols = {"rhs_nm_per_rad": np.full(q.size, float(p.K_s))}
    for c in curves:
        cols[f"lhs_H{c.H:g}"] = c.lhs
    w.curves("tuning_curves.csv", "q_bandwidth_hz", q, cols)
    w.rows("tuning_summary.csv",
           ("H", "argmin_hz", "boundary", "interior_minimum", "satisfiable", "band"),
           [(c.H, c.argmin_hz, c.boundary, c.interior_minimum, c.satisfiable, grid.describe())
            for c in curves])


def _run_frequency_sweep(scn, w):
    k = scn.values["frequency_sweep"]
    p, pd = scn.params(), scn.pd()
    rows = frequency_rmse_sweep(k["frequencies_hz"], k["amplitude_nm"], p, scn.sensing(p), pd,
                                scn.values["observer"]["q_bandwidths_hz"], k["settle_s"], scn.seed)
    labels = list(dict.fromkeys(r.controller for r in rows))
    for metric in ("tracking_rmse", "estimation_rmse"):
        table = []
        for f in k["frequencies_hz"]:
            by = {r.controller: getattr(r, metric) for r in rows if r.frequency_hz == f}
            table.append([f] + [by[c] for c in labels])
        w.rows(f"{metric}.csv", ["frequency_hz"] + [f"{c}_nm" for c in labels], table)


def _run_error_distribution(scn, w):
    k = scn.values["error_distribution"]
    enc = scn.spring_encoder()
    if enc is None:
        raise ScenarioError("error_distribution needs spring_encoder.effects to be non-empty")
    t = np.arange(0.0, k["duration_s"], 1.0 / k["sample_rate_hz"])
    torque = np.concatenate([a * np.sin(2 * math.pi * f * t)
                             for a in k["torque_amplitudes_nm"] for f in k["frequencies_hz"]])
    rng = np.random.default_rng(scn.seed)
    stats_rows, hist_rows = [], []
    for K in k["stiffnesses_nm_per_rad"]:
        measured = quantize(torque / K, enc, rng)
        st = collect_error_stats(torque, dfm_estimate(measured, K), bins=k["bins"])
        stats_rows.append((K, st.mean, st.variance, st.n, st.excess_kurtosis))
        hist_rows.extend((K, lo, hi, c) for lo, hi, c in zip(st.edges[:-1], st.edges[1:], st.counts))
    w.rows("error_stats.csv", ("stiffness_nm_per_rad", "mean_nm", "variance_nm2", "samples",
                               "excess_kurtosis"), stats_rows)
    w.rows("error_histograms.csv", ("stiffness_nm_per_rad", "bin_left_nm", "bin_right_nm", "count"),
           hist_rows)


_DISPATCH = {
    "step_tracking": _run_step_tracking,
    "noise_regulation": _run_noise_regulation,
    "estimation_accuracy": _run_estimation_accuracy,
    "tuning_sweep": _run_tuning_sweep,
    "frequency_sweep": _run_frequency_sweep,
    "error_distribution": _run_error_distribution,
}


def execute(scn):
    """Run a validated scenario, write its CSVs and finally ``manifest.json``."""
    manifest = RunManifest(scn.config_hash(), __version__, scn.seed, scenario=scn.name, kind=scn.kind)
    w = _Writer(scn.output_dir, manifest)
    t0 = time.perf_counter()
    try:
        _DISPATCH[scn.kind](scn, w)
    except DivergenceError as exc:
        manifest.status = "failed"
        manifest.failure = {"error": str(exc), "field": exc.field, "step": exc.step}
    manifest.wall_time_s = time.perf_counter() - t0
    (w.out / "manifest.json").write_text(manifest.to_json(), encoding="utf-8")
    return manifest


# shipped templates ----------------------------------------------------------

def template_dir():
    return resources.files("seaforce") / "scenarios"


def list_templates():
    """(file name, kind, name) of every shipped scenario."""
    out = []
    for entry in sorted(template_dir().iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".cfg"):
            scn = parse_scenario_text(entry.read_text(encoding="utf-8"), entry.name)
            out.append((entry.name, scn.kind, scn.name))
    return out


def template_path(name):
    return Path(str(template_dir() / name))


def describe(kind):
    """Human-readable schema of ``kind`` with defaults."""
    lines = [f"# scenario kind: {kind}"]
    if kind == "tuning_sweep":
        lines.append("# norms are finite-band maxima over [band_min_hz, band_max_hz]; "
                     "the band is reported with every result")
    for section, fields_ in schema_for(kind).items():
        lines.append(f"[{section}]")
        for key, fld in fields_.items():
            if fld.required:
                default = "<required>"
            elif isinstance(fld.default, tuple):
                default = ", ".join(str(x) for x in fld.default) or "none"
            else:
                default = "none" if fld.default is None else str(fld.default).lower() \
                    if isinstance(fld.default, bool) else str(fld.default)
            note = f"  ; {fld.doc}" if fld.doc else ""
            if fld.choices:
                note += f"  ; one of {', '.join(fld.choices)}"
            lines.append(f"{key} = {default}{note}")
        lines.append("")
    return "\n".join(lines)
