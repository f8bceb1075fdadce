# -*- coding: utf-8 -*-
"""
Console module
Command-line surface: validate, fire, auts, canon and explore.

Results go to stdout; diagnostics and log records go to stderr.
"""

import argparse
import sys
from typing import List, Optional

from ..core.canonical import canonicalize, tokenwise_canonicalize
from ..core.config import ModeCaps, Settings, configure_logging, get_logger
from ..core.eos import NestedMarking
from ..core.errors import Diagnostic, EosError, ModelParseError
from ..core.explorer import (REDUCTIONS, QuotientValidator, explore, explore_full, export_dot,
                             export_stats_json)
from ..core.model_parser import ModelDocument, load, parse_nested_marking
from ..core.symmetry import eos_automorphisms
from ..locales import messages

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TRUNCATED = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='eos-tool', description='Elementary object system symmetry toolkit')
    parser.add_argument('--log-level', default=None, help='DEBUG, INFO, WARNING (default) or ERROR')
    commands = parser.add_subparsers(dest='command', required=True)

    validate = commands.add_parser('validate', help='check a model and report diagnostics')
    validate.add_argument('model')
    validate.add_argument('--conservative', action='store_true', help='print whether the typing is conservative')
    validate.add_argument('--pt-like', action='store_true', help='print whether every place is black-typed')

    fire = commands.add_parser('fire', help='fire an event and print the successor markings')
    fire.add_argument('model')
    fire.add_argument('--event', required=True, help='event label, system transition or idle name')
    fire.add_argument('--mode', type=int, default=0, help='index into the sorted mode list (default 0)')
    fire.add_argument('--steps', type=int, default=1, help='fire the event this many times')
    fire.add_argument('--marking', help='start marking instead of the initial one')

    auts = commands.add_parser('auts', help='print the automorphism group')
    auts.add_argument('model')
    auts.add_argument('--cap', type=int, default=None, help='maximum group size')
    auts.add_argument('--all', action='store_true', help='list every element, not only generators')

    canon = commands.add_parser('canon', help='print the canonical representative of a marking')
    canon.add_argument('model')
    canon.add_argument('--marking', help='marking to canonicalize (default: the initial marking)')
    canon.add_argument('--scheme', choices=('tokenwise', 'group'), default='tokenwise',
                       help='tokenwise: per-token minima after relocation; group: exact orbit minimum')

    exp = commands.add_parser('explore', help='build the reachability graph')
    exp.add_argument('model')
    exp.add_argument('--reduce', choices=REDUCTIONS, default='none')
    exp.add_argument('--max-states', type=int, default=None)
    exp.add_argument('--max-depth', type=int, default=None)
    exp.add_argument('--workers', type=int, default=None)
    exp.add_argument('--marking', help='start marking instead of the initial one')
    exp.add_argument('--dot', help='write the graph in DOT format to this file')
    exp.add_argument('--stats', help='write the statistics JSON to this file instead of stdout')
    exp.add_argument('--verify', action='store_true', help='compare against the full graph')
    exp.add_argument('--report', help='verify and write a readable validation report to this file')
    exp.add_argument('--strict', action='store_true', help='exit with 2 when bounds truncate the graph')
    exp.add_argument('--timing', action='store_true', help='record wall time in the statistics')
    exp.add_argument('--proj-modes', action='store_true', help='keep one mode per projection class')
    exp.add_argument('--keep-modes', action='store_true', help='retain full modes for every edge')
    return parser


class ConsoleApp:
    """Runs one command against one model file"""

    def __init__(self, stdout=None, stderr=None, settings: Optional[Settings] = None):
        self.out = stdout or sys.stdout
        self.err = stderr or sys.stderr
        self.settings = settings or Settings.from_env()
        self.lang = messages
        self.lang.set_language(self.settings.language)
        self.logger = get_logger('Console')

    def say(self, text: str):
        self.out.write(text + '\n')

    def complain(self, text: str):
        self.err.write(text + '\n')

    def report(self, diagnostics: List[Diagnostic], source_name: str):
        for d in diagnostics:
            self.complain(d.format(source_name))

    def load(self, path: str) -> Optional[ModelDocument]:
        try:
            return load(path, self.settings.label_cap)
        except ModelParseError as e:
            self.report(e.diagnostics, path)
            return None
        except OSError as e:
            self.complain(f"{path}: {e.strerror or e}")
            return None

    def marking(self, document: ModelDocument, text: Optional[str]) -> Optional[NestedMarking]:
        if text is None:
            return document.initial
        try:
            mu = parse_nested_marking(text)
        except ValueError as e:
            column = (e.args[1] if len(e.args) > 1 else 0) + 1
            self.report([Diagnostic('MalformedMarking', self.lang.get_text('MalformedMarking', e.args[0]),
                                    '', 1, column)], '--marking')
            return None
        problems = document.eos.validate_marking(mu)
        if problems:
            self.report(problems, '--marking')
            return None
        return mu

    def run(self, args: argparse.Namespace) -> int:
        document = self.load(args.model)
        if document is None:
            return EXIT_ERROR
        handler = getattr(self, f"cmd_{args.command}")
        try:
            return handler(document, args)
        except EosError as e:
            self.complain(f"{args.model}: {type(e).__name__}: {e}")
            return EXIT_ERROR

    # -- commands -------------------------------------------------------

    def cmd_validate(self, document: ModelDocument, args) -> int:
        eos = document.eos
        self.say(self.lang.get_text('valid'))
        if args.conservative:
            self.say(self.lang.get_text('conservative', str(eos.is_conservative()).lower()))
        if args.pt_like:
            self.say(self.lang.get_text('pt_like', str(eos.is_pt_like()).lower()))
        return EXIT_OK

    def cmd_fire(self, document: ModelDocument, args) -> int:
        eos = document.eos
        mu = self.marking(document, args.marking)
        if mu is None:
            return EXIT_ERROR
        candidates = eos.find_events(args.event)
        if not candidates:
            self.complain(self.lang.get_text('no_such_event', args.event, ', '.join(e.label for e in eos.events)))
            return EXIT_ERROR
        if len(candidates) > 1:
            self.complain(self.lang.get_text('ambiguous_event', args.event, ', '.join(e.label for e in candidates)))
            return EXIT_ERROR
        event = candidates[0]
        caps = self.settings.bounds.mode_caps
        for _ in range(max(args.steps, 0)):
            modes = eos.enumerate_modes(mu, event, caps)
            if not modes:
                self.complain(self.lang.get_text('not_enabled', event.label))
                return EXIT_ERROR
            if not 0 <= args.mode < len(modes):
                self.complain(self.lang.get_text('no_mode', event.label, args.mode, len(modes)))
                return EXIT_ERROR
            mu = eos.fire(mu, event, modes[args.mode])
            self.say(eos.render_marking(mu))
        return EXIT_OK

    def cmd_auts(self, document: ModelDocument, args) -> int:
        cap = args.cap if args.cap is not None else self.settings.group_cap
        group = eos_automorphisms(document.eos, cap)
        self.say(self.lang.get_text('group_order', group.order))
        if group.truncated:
            self.say(self.lang.get_text('group_truncated', 'true'))
        self.say(self.lang.get_text('generators'))
        for g in group.generators:
            self.say(f"  {g.cycle_notation()}")
        if args.all:
            self.say(self.lang.get_text('elements'))
            for g in group.elements:
                self.say(f"  {g.cycle_notation()}")
        return EXIT_OK

    def cmd_canon(self, document: ModelDocument, args) -> int:
        mu = self.marking(document, args.marking)
        if mu is None:
            return EXIT_ERROR
        group = eos_automorphisms(document.eos, self.settings.group_cap)
        rep = tokenwise_canonicalize(mu, group) if args.scheme == 'tokenwise' else canonicalize(mu, group)
        self.say(document.eos.render_marking(rep))
        return EXIT_OK

    def cmd_explore(self, document: ModelDocument, args) -> int:
        eos = document.eos
        mu0 = self.marking(document, args.marking)
        if mu0 is None:
            return EXIT_ERROR
        base = self.settings.bounds
        caps = ModeCaps(base.mode_caps.max_lambda, base.mode_caps.max_distributions,
                        collapse_projection=args.proj_modes)
        bounds = base.with_overrides(max_states=args.max_states, max_depth=args.max_depth,
                                     workers=args.workers, mode_caps=caps,
                                     keep_modes=args.keep_modes or None)
        group = None
        verify = args.verify or bool(args.report)
        if args.reduce in ('aut', 'aut+proj') or verify:
            group = eos_automorphisms(eos, self.settings.group_cap)
        graph = explore(eos, mu0, args.reduce, bounds, group)
        self.logger.info(self.lang.get_text('explore_summary', len(graph.states), len(graph.edges),
                                            graph.truncated, graph.reduction, graph.group_order))

        extra = {}
        exit_code = EXIT_OK
        if verify:
            full = graph if args.reduce == 'none' else explore_full(eos, mu0, bounds)
            report = QuotientValidator.validate_quotient(full, graph, group)
            extra['full_states'] = report.full_states
            extra['violations'] = [f"{v.kind}: {v.detail}" for v in report.violations]
            for v in report.violations:
                self.complain(self.lang.get_text('violation', v.kind, v.detail))
            self.logger.info(self.lang.get_text('verify_summary', report.full_states, report.reduced_states,
                                                len(report.violations)))
            if args.report:
                QuotientValidator.generate_report(report, args.report)
            if report.violations:
                exit_code = EXIT_ERROR

        if args.dot:
            with open(args.dot, 'w', encoding='utf-8', newline='\n') as f:
                f.write(export_dot(graph))
        stats = export_stats_json(graph, timing=args.timing, extra=extra)
        if args.stats:
            with open(args.stats, 'w', encoding='utf-8', newline='\n') as f:
                f.write(stats)
        else:
            self.out.write(stats)

        if exit_code == EXIT_OK and args.strict and graph.truncated:
            self.complain(self.lang.get_text('strict_truncated'))
            exit_code = EXIT_TRUNCATED
        return exit_code


def main(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    """Parse arguments, configure logging and run the command; returns the exit code"""
    args = build_parser().parse_args(argv)
    settings = Settings.from_env()
    configure_logging(args.log_level or settings.log_level)
    return ConsoleApp(stdout, stderr, settings).run(args)
