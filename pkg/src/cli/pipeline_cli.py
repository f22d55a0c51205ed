"""Command-line pipeline: build-grid, scenario, train, simulate, compare."""

import argparse
import functools
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from src.artifacts import RunStore, sha256_json, write_json, write_training_scatter
from src.grid import build_synthetic_feeder, load_topology, network_hash, save_topology, validate_radial
from src.learning import (
    extract_training_set,
    fit_polynomial,
    load_thresholds,
    save_thresholds,
    thresholds_hash,
    train_all,
)
from src.metrics import score_run
from src.models import ControllerKind, PipelineConfig, RunManifest, SimResult, SimConfig
from src.models.config import CONTROLLER_KINDS
from src.scenario import generate_scenario, load_scenario, save_scenario, scenario_hash, with_penetration
from src.simulation import baseline_inputs, run, run_controllers, table_from_reports
from src.utils.error_recovery import exit_code_for, format_error_for_user, log_error_with_context
from src.utils.validation import validate_choice
from src.utils.exceptions import (
    DegenerateDataError,
    FeederSimError,
    IncompatibleArtifactsError,
    InvalidConfigurationError,
    ThresholdError,
)

logger = logging.getLogger(__name__)


def persist_run(out_dir: str, config_hash: str, thresholds_digest: Optional[str],
                series_every_s: float, emit_plot_data: bool,
                result: SimResult, cfg: SimConfig) -> dict:
    """Score a finished run and write its directory; returns the manifest document."""
    store = RunStore(out_dir)
    report = score_run(result, v_min=cfg.controller.aimd.v_min_v)
    manifest = RunManifest(
        controller=cfg.controller.controller,
        config_hash=config_hash,
        scenario_hash=result.scenario_hash,
        network_hash=result.network_hash,
        thresholds_hash=thresholds_digest if cfg.controller.controller == "d_aimd" else None,
    )
    return store.save_run(result, report, manifest, series_every_s, emit_plot_data).to_dict()


class PipelineCLI:
    """Subcommand front end of the co-simulation pipeline."""

    def __init__(self):
        self.parser = self._build_parser()
        self.commands: Dict[str, Callable[[argparse.Namespace], int]] = {
            "build-grid": self.cmd_build_grid,
            "scenario": self.cmd_scenario,
            "train": self.cmd_train,
            "simulate": self.cmd_simulate,
            "compare": self.cmd_compare,
        }

    def _build_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--config", help="JSON configuration file")
        common.add_argument("--seed", type=int, help="scenario seed")
        common.add_argument("--penetration", type=float, help="EV penetration in [0, 1]")
        common.add_argument("--out", default="out", help="output directory (default: out)")
        common.add_argument("--emit-plot-data", action="store_true",
                            help="also write tidy CSVs for charting")
        common.add_argument("--log-level", default="WARNING",
                            choices=["DEBUG", "INFO", "WARNING", "ERROR"])
        common.add_argument("-v", "--verbose", action="store_true", help="log progress (INFO)")

        parser = argparse.ArgumentParser(
            prog="feeder-aimd",
            description="EV charging control co-simulation on a radial distribution feeder.",
        )
        sub = parser.add_subparsers(dest="command", required=True)
        sub.add_parser("build-grid", parents=[common], help="build and validate the feeder topology")
        sub.add_parser("scenario", parents=[common], help="generate the seeded load and EV dataset")
        sub.add_parser("train", parents=[common], help="run the no-EV baseline and train node thresholds")
        simulate = sub.add_parser("simulate", parents=[common], help="run one controller or all of them")
        simulate.add_argument("--controller", default=None,
                              help=f"one of {', '.join(CONTROLLER_KINDS)} or 'all'")
        simulate.add_argument("--thresholds", help="trained threshold file (required for d_aimd)")
        simulate.add_argument("--workers", type=int, default=1, help="parallel runs for --controller all")
        compare = sub.add_parser("compare", parents=[common], help="tabulate the scores of finished runs")
        compare.add_argument("runs", nargs="*", help="run directories (default: every run under --out)")
        return parser

    def parse(self, argv: Optional[List[str]] = None) -> argparse.Namespace:
        return self.parser.parse_args(argv)

    def execute(self, args: argparse.Namespace) -> int:
        """Run the selected subcommand; returns the process exit code."""
        try:
            return self.commands[args.command](args)
        except FeederSimError as e:
            log_error_with_context(e, args.command, {"exit_code": e.exit_code})
            print(format_error_for_user(e, args.command), file=sys.stderr)
            return exit_code_for(e)

    def run(self, argv: Optional[List[str]] = None) -> int:
        return self.execute(self.parse(argv))

    # -- helpers -------------------------------------------------------------

    def _config(self, args) -> PipelineConfig:
        cfg = PipelineConfig.load(args.config)
        if args.seed is not None:
            cfg.scenario.seed = args.seed
        if args.penetration is not None:
            if not 0 <= args.penetration <= 1:
                raise InvalidConfigurationError("Invalid penetration", f"{args.penetration} not in [0, 1]")
            cfg.scenario.penetration = args.penetration
        return cfg

    def _network(self, store: RunStore, cfg: PipelineConfig):
        if store.topology_path.exists():
            return load_topology(store.topology_path)
        logger.info("No topology in %s; building it from the configuration", store.root)
        return build_synthetic_feeder(cfg.feeder)

    # -- commands ------------------------------------------------------------

    def cmd_build_grid(self, args) -> int:
        cfg = self._config(args)
        store = RunStore(args.out)
        net = build_synthetic_feeder(cfg.feeder)
        report = validate_radial(net)
        store.topology_path.parent.mkdir(parents=True, exist_ok=True)
        save_topology(net, store.topology_path)
        write_json(store.topology_report_path, report.to_dict())
        print(f"topology: {net.house_count} houses, {net.load_point_count} load points, "
              f"{net.transformer_count} transformers, {len(net.buses)} buses -> {store.topology_path}")
        print(f"network hash: {network_hash(net)}")
        return 0

    def cmd_scenario(self, args) -> int:
        cfg = self._config(args)
        store = RunStore(args.out)
        net = self._network(store, cfg)
        scenario = generate_scenario(net, cfg.scenario)
        save_scenario(scenario, store.scenario_dir)
        print(f"scenario: seed {scenario.seed}, {len(scenario.profiles)} houses, "
              f"{len(scenario.evs)} EVs -> {store.scenario_dir}")
        print(f"scenario hash: {scenario_hash(scenario)}")
        return 0

    def cmd_train(self, args) -> int:
        cfg = self._config(args)
        store = RunStore(args.out)
        net = self._network(store, cfg)
        scenario = load_scenario(store.scenario_dir)
        baseline, baseline_cfg = baseline_inputs(scenario, cfg.sim)
        expected = scenario_hash(baseline)

        manifest = None
        if (store.baseline_dir / "manifest.json").exists():
            manifest = store.load_manifest(store.baseline_dir)
            if manifest.scenario_hash != expected or manifest.network_hash != network_hash(net):
                logger.info("Stored baseline does not match the scenario; re-running it")
                manifest = None
        if manifest is None:
            result = run(net, baseline, baseline_cfg)
            report = score_run(result, v_min=cfg.controller.aimd.v_min_v)
            store.save_run(result, report, RunManifest(
                controller="baseline",
                config_hash=sha256_json(cfg.to_dict()),
                scenario_hash=result.scenario_hash,
                network_hash=result.network_hash,
            ), cfg.sim.series_every_s, directory=store.baseline_dir)
            print(f"baseline: peak {result.substation_apparent.max() / 1e6:.3f} MVA")

        recording = store.load_recording(store.baseline_dir)
        rating = cfg.controller.capacity_target(net.substation_rating)
        table = train_all(recording, net, cfg.learning, rating=rating)
        save_thresholds(table, store.thresholds_path)
        summary = table.summary()
        print(f"thresholds: {summary['nodes']} nodes trained, {summary['failures']} failed "
              f"-> {store.thresholds_path}")
        if table.models:
            print(f"theta2 < 0 at {summary['theta2_negative']} nodes; V_th "
                  f"{summary['v_th_min']:.2f} / {summary['v_th_median']:.2f} / {summary['v_th_max']:.2f} V")

        if args.emit_plot_data and table.models:
            node = sorted(table.models)[0]
            samples = extract_training_set(recording, node, cfg.learning.sampling_s)
            write_training_scatter(samples, fit_polynomial(samples, cfg.learning.degree,
                                                           cfg.learning.degeneracy_floor),
                                   store.root / "plot_data" / "training_scatter.csv")

        if table.failures:
            listed = ", ".join(sorted(table.failures)[:10])
            degenerate = any(msg.startswith(DegenerateDataError.__name__) for msg in table.failures.values())
            error = DegenerateDataError if degenerate else ThresholdError
            raise error(f"{len(table.failures)} nodes could not be trained", listed)
        return 0

    def cmd_simulate(self, args) -> int:
        cfg = self._config(args)
        store = RunStore(args.out)
        net = self._network(store, cfg)
        scenario = load_scenario(store.scenario_dir)
        if args.penetration is not None:
            scenario = with_penetration(scenario, args.penetration)

        choice = args.controller or cfg.controller.controller
        kinds = list(CONTROLLER_KINDS) if choice == "all" else [
            validate_choice(choice, CONTROLLER_KINDS, "controller")]

        thresholds = None
        digest = None
        if args.thresholds:
            thresholds = load_thresholds(args.thresholds)
            if thresholds.network_hash and thresholds.network_hash != network_hash(net):
                raise IncompatibleArtifactsError("Thresholds were trained on a different network",
                                                 args.thresholds)
            digest = thresholds_hash(thresholds)
        elif "d_aimd" in kinds:
            raise InvalidConfigurationError("D-AIMD requires --thresholds")

        sink = functools.partial(persist_run, str(store.root), sha256_json(cfg.to_dict()), digest,
                                 cfg.sim.series_every_s, args.emit_plot_data)
        manifests = run_controllers(net, scenario, cfg.sim, kinds, thresholds,
                                    workers=max(1, args.workers), sink=sink)
        for kind, manifest in manifests.items():
            scores = manifest["scores"]
            print(f"{ControllerKind(kind).label}: comm_events {manifest['comm_events']}, "
                  f"CUS {scores['cus_pct']:.2f}%, VVS {scores['vvs_vs']:.1f} V-s -> {store.run_dir(kind)}")
        return 0

    def cmd_compare(self, args) -> int:
        store = RunStore(args.out)
        runs = args.runs or store.list_runs()
        if not runs:
            raise InvalidConfigurationError("No runs to compare", str(store.root / "runs"))
        reports = {}
        hashes = {}
        for run_ref in runs:
            manifest = store.load_manifest(run_ref)
            name = str(run_ref)
            reports[name] = store.load_scores(run_ref)
            hashes[name] = (manifest.scenario_hash, manifest.network_hash)
        table = table_from_reports(reports, hashes)
        table.to_csv(store.root / "comparison.csv")
        text = table.to_text()
        Path(store.root / "comparison.txt").write_text(text, encoding="utf-8")
        print(text, end="")
        return 0
