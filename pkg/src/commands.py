"""Subcommand implementations. Each returns the process exit code."""
import argparse
import dataclasses
import json
import logging
import os
import sys
import time
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from src.algebra.groebner import Limits
from src.algebra.oracle import oracle_local_dimension
from src.algebra.parser import parse_polynomial
from src.algebra.poly import MonomialOrder, format_rational, parse_rational
from src.algebra.singularity import (STATUS_LIMIT, STATUS_NON_ISOLATED, STATUS_OK, Germ, NormalFormSpec,
                                     invariant_report, jacobian_ideal, modulus_sweep, normal_form,
                                     tjurina_ideal)
from src.comb import scans
from src.comb.lle import LLEParams
from src.comb.spectra import comb_teeth, power_spectrum
from src.config import RunConfig
from src.errors import InvalidParameterError
from src import export
from src.runman import get_run_manager

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEGENERATE = 2
EXIT_LIMIT = 3


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


# --- algebra ---------------------------------------------------------------------------

def _germ_from_args(args: argparse.Namespace) -> Germ:
    if args.poly is not None:
        if args.family is not None:
            raise InvalidParameterError('give either --poly or --family, not both')
        variables = tuple(v.strip() for v in args.vars.split(',') if v.strip())
        order = MonomialOrder.parse(args.order)
        return Germ(parse_polynomial(args.poly, variables, order), args.poly)
    if args.family is None:
        raise InvalidParameterError('one of --poly or --family is required')
    modulus = parse_rational(args.modulus) if args.modulus is not None else None
    spec = NormalFormSpec(args.family, args.k, args.p, args.q, modulus)
    return normal_form(spec, allow_degenerate=True)


def cmd_invariants(args: argparse.Namespace) -> int:
    germ = _germ_from_args(args)
    order = MonomialOrder.parse(args.order)
    limits = Limits()
    report = invariant_report(germ, limits, order)
    result = report.to_dict()
    if args.oracle:
        mu = oracle_local_dimension(jacobian_ideal(germ).generators, limits.max_local_order)
        tau = oracle_local_dimension(tjurina_ideal(germ).generators, limits.max_local_order)
        result['oracle'] = {
            'mu': mu,
            'tau': tau,
            'agree': mu == result['mu'] and tau == result['tau'],
        }
    _emit(json.dumps(result, indent=2, sort_keys=True) + '\n', args.output)
    return EXIT_DEGENERATE if report.status == STATUS_NON_ISOLATED else EXIT_OK


def parse_modulus_range(text: str) -> List[Fraction]:
    """`start:stop:step` with rational parts; stop is included when it lies on the grid."""
    parts = text.split(':')
    if len(parts) != 3:
        raise InvalidParameterError(f'range {text!r} is not start:stop:step')
    start, stop, step = (parse_rational(p) for p in parts)
    if step <= 0:
        raise InvalidParameterError('range step must be positive')
    values = []
    a = start
    while a <= stop:
        values.append(a)
        a += step
    return values


def cmd_sweep_modulus(args: argparse.Namespace) -> int:
    if args.values is not None:
        values = [parse_rational(v) for v in args.values.split(',') if v.strip()]
    elif args.range is not None:
        values = parse_modulus_range(args.range)
    else:
        raise InvalidParameterError('one of --values or --range is required')
    rows = modulus_sweep(values, Limits(), args.workers)

    if args.output:
        export.write_csv(args.output, export.SWEEP_HEADER, export.sweep_rows(rows))
    else:
        export.write_rows(sys.stdout, export.SWEEP_HEADER, export.sweep_rows(rows))

    statuses = {row.status for row in rows}
    if STATUS_OK in statuses:
        return EXIT_OK
    if STATUS_LIMIT in statuses:
        return EXIT_LIMIT
    return EXIT_DEGENERATE


# --- simulation ----------------------------------------------------------------------

def _overrides(args: argparse.Namespace) -> List[str]:
    items = list(args.set or [])
    if args.seed is not None:
        items.append(f'master_seed={args.seed}')
    if args.workers is not None:
        items.append(f'workers={args.workers}')
    if args.output_dir is not None:
        items.append(f'output_dir={json.dumps(args.output_dir)}')
    return items


class _Run:
    """One simulation subcommand invocation: resolved config, output directory, artifacts."""

    def __init__(self, args: argparse.Namespace, command: str):
        self.command = command
        self.manager = get_run_manager()
        self.config: RunConfig = self.manager.load(args.config, _overrides(args))
        self.directory = self.manager.output_dir(self.config, command)
        self.artifacts: List[str] = []
        self.summary: Dict[str, Any] = {}
        self.started = time.perf_counter()

    def path(self, name: str) -> str:
        path = os.path.join(self.directory, name)
        self.artifacts.append(path)
        return path

    def designs(self) -> List[Tuple[str, LLEParams]]:
        """The configured comb and, when enabled, the standard comparison comb."""
        out = [('', self.config.model)]
        if self.config.compare_standard:
            out.append(('_standard', self.config.standard_model()))
        return out

    def finish(self) -> int:
        self.manager.write_config_echo(self.directory, self.config)
        self.manager.write_manifest(self.directory, self.command, self.config, self.artifacts,
                                    self.started, self.summary)
        logger.info('%s: wrote %s', self.command, ', '.join(os.path.basename(a) for a in self.artifacts))
        return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    run = _Run(args, 'simulate')
    cfg = run.config
    setup = cfg.setup()
    traj = scans.run_to_steady_state(cfg.model, setup)
    stability = setup.criteria.classify(traj)
    if traj.flagged:
        logger.warning('simulation blew up at step %d', traj.blowup_step)
    export.write_spectrum(run.path('spectrum.csv'), power_spectrum(traj.final))
    export.write_trajectory_csv(run.path('trajectory.csv'), traj)
    export.write_trajectory_binary(run.path('trajectory.bin'), traj)
    run.summary = {'stability': stability.value, 'blowup_step': traj.blowup_step, 'snapshots': len(traj)}
    return run.finish()


def cmd_tongues(args: argparse.Namespace) -> int:
    run = _Run(args, 'tongues')
    cfg = run.config
    result = scans.arnold_tongue_scan(cfg.tongues.detuning, cfg.tongues.modulus, cfg.model, cfg.setup(),
                                      workers=cfg.workers)
    export.write_stability_map(run.path('stability_map.csv'), result)
    run.summary = {c.value: result.count(c) for c in scans.Stability}
    return run.finish()


def cmd_eps(args: argparse.Namespace) -> int:
    run = _Run(args, 'eps')
    cfg = run.config
    eps = cfg.eps
    result = scans.power_threshold_scan(eps.detuning, eps.modulus, cfg.model, cfg.setup(),
                                        (eps.bracket[0], eps.bracket[1]), eps.iterations,
                                        eps.localized_fraction, workers=cfg.workers)
    export.write_eps_surface(run.path('eps_surface.csv'), result)
    found = sum(t.status is scans.ThresholdStatus.FOUND for _, _, t in result.rows())
    run.summary = {'cells': len(result.detunings) * len(result.moduli), 'found': found}
    return run.finish()


def cmd_disorder(args: argparse.Namespace) -> int:
    run = _Run(args, 'disorder')
    cfg = run.config
    section = cfg.disorder
    for suffix, model in run.designs():
        curve = scans.disorder_fidelity_curve(section.etas, section.realizations, model, cfg.setup(),
                                              section.targets, workers=cfg.workers)
        export.write_fidelity_curve(run.path(f'fidelity_curve{suffix}.csv'), curve)
        run.summary[f'blowups{suffix}'] = sum(p.blowup_count for p in curve.points)
    return run.finish()


def cmd_pinning(args: argparse.Namespace) -> int:
    run = _Run(args, 'pinning')
    cfg = run.config
    section = cfg.pinning
    for suffix, model in run.designs():
        report = scans.pinning_report(section.realizations, section.eta, model, cfg.setup(), section.targets,
                                      section.threshold, section.window, workers=cfg.workers)
        export.write_pinning(run.path(f'pinning{suffix}.csv'), report)
        run.summary[f'teeth{suffix}'] = len(report.teeth)
        run.summary[f'lost{suffix}'] = sum(t.lost for t in report.teeth)
    run.summary['realizations'] = section.realizations
    return run.finish()


def cmd_beatnote(args: argparse.Namespace) -> int:
    run = _Run(args, 'beatnote')
    cfg = run.config
    section = cfg.beatnote
    evolution = cfg.evolution
    if section.record_every is not None:
        evolution = dataclasses.replace(evolution, record_every=section.record_every)
    for suffix, model in run.designs():
        note = scans.beat_note_run(model, cfg.setup(evolution), section.repetition_rate, section.window)
        export.write_psd(run.path(f'psd{suffix}.csv'), note)
        run.summary[f'peak_freq{suffix}'] = note.peak_freq
        run.summary[f'fwhm{suffix}'] = note.fwhm
        run.summary['resolution'] = note.resolution
    return run.finish()


def cmd_teeth(args: argparse.Namespace) -> int:
    run = _Run(args, 'teeth')
    cfg = run.config
    levels = [float(parse_rational(level)) for level in cfg.teeth.levels]
    profile = cfg.model.coupling
    teeth = comb_teeth(profile, levels, cfg.grid)
    export.write_profile(run.path('profile.csv'), profile, cfg.grid)
    export.write_teeth(run.path('teeth.csv'), teeth)
    run.summary = {format_rational(parse_rational(lv)): len(t.positions)
                   for lv, t in zip(cfg.teeth.levels, teeth)}
    return run.finish()


def cmd_list_configs(args: argparse.Namespace) -> int:
    for name in get_run_manager().list_configs():
        sys.stdout.write(name + '\n')
    return EXIT_OK


COMMANDS = {
    'invariants': cmd_invariants,
    'sweep-modulus': cmd_sweep_modulus,
    'simulate': cmd_simulate,
    'tongues': cmd_tongues,
    'eps': cmd_eps,
    'disorder': cmd_disorder,
    'pinning': cmd_pinning,
    'beatnote': cmd_beatnote,
    'teeth': cmd_teeth,
    'list-configs': cmd_list_configs,
}
