"""Command-line interface with decorator-registered subcommands."""

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from colorama import init, Fore, Style

from app.audit import CheckResult
from app.coded_design import CODE_FORMAT, HKCode, domination_audit, reduce_hk_canonical
from app.exceptions import (
    ConfigurationError,
    GraphError,
    LayoutError,
    SizeGuardError,
    StoreError,
    ValidationError,
)
from app.graph_families import gen_example
from app.graph_model import FileGraph, RootedTree, SparseHamiltonianGraph, graph_from_dict
from app.input_validators import ORACLE_TARGETS, PayloadValidator
from app.jump_tree import caterpillar_layout, linearize_decomposition, min_max_decomposition
from app.layout_config import LayoutConfig
from app.logger import Logger
from app.metrics import evaluate, format_fraction, jump_metric
from app.observers import AutoSaveObserver, LoggingObserver
from app.oracle import ExactSearch
from app.paper_examples import run_paper_examples
from app.report import ReportManager
from app.stores import store_from_dict
from app.stretch_folding import plan_sham_layout
from app.zero_frag import zero_frag_general_report, zero_frag_t2

# Initialize colorama
init(autoreset=True)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_INPUT = 2

INPUT_ERRORS = (GraphError, StoreError, SizeGuardError, ValidationError, ConfigurationError)

FAMILY_PARAMS = ('N', 'n', 'k', 'c', 'h', 'q', 'depth', 'body', 'root')


def help_decorator(func):
    """Decorator to register commands for dynamic help menu."""
    if not hasattr(help_decorator, 'commands'):
        help_decorator.commands = {}

    func_name = func.__name__.replace('_cmd_', '').replace('_', '-')
    help_decorator.commands[func_name] = func.__doc__ or "No description"
    return func


def exit_code_for(error: Exception) -> int:
    """Exit status for an exception: 2 for bad input, 1 otherwise."""
    return EXIT_BAD_INPUT if isinstance(error, INPUT_ERRORS) else EXIT_FAILED


def _to_json(value):
    if isinstance(value, Fraction):
        return format_fraction(value)
    return str(value)


class LayoutCLI:
    """Builds, evaluates and checks chunk-store layouts from the shell."""

    def __init__(self, config: Optional[LayoutConfig] = None):
        """Initialize the CLI with all components."""
        self.config = config or LayoutConfig()
        self.validator = PayloadValidator(self.config)
        self.report_manager = ReportManager(self.config)
        self.logger = Logger()
        self.inputs: dict[str, str] = {}

        # Observer Pattern
        self.observers = []
        self._register_observers()

    def _register_observers(self):
        """Register observers."""
        self.observers.append(LoggingObserver())
        if self.config.auto_save:
            self.observers.append(AutoSaveObserver(self.report_manager))

    def _record(self, check: CheckResult) -> CheckResult:
        """Keep a check and notify all observers."""
        self.report_manager.add_check(check)
        for observer in self.observers:
            observer.on_check(check)
        return check

    def _load(self, path: str, kind: str) -> dict:
        payload = self.validator.load_json(path)
        self.validator.validate_format(payload, kind)
        self.inputs[str(path)] = hashlib.sha256(Path(path).read_bytes()).hexdigest()
        return payload

    def _load_graph(self, path: str):
        return graph_from_dict(self._load(path, 'graph'))

    def _load_tree(self, path: str, root: Optional[int]) -> RootedTree:
        graph = self._load_graph(path)
        if isinstance(graph, SparseHamiltonianGraph):
            raise GraphError("a jump layout needs a tree, got a sparse Hamiltonian graph")
        if isinstance(graph, FileGraph):
            graph = RootedTree.from_edges(graph.n, graph.edge_list(), root or self.config.default_root)
        elif root is not None and root != graph.root:
            graph = graph.reroot(root)
        return graph

    def _emit(self, payload: dict, out: Optional[str]) -> str:
        """Attach input digests, then write to out or return the JSON text."""
        payload = dict(payload)
        payload['input_sha256'] = dict(self.inputs)
        if out:
            self.report_manager.save_json(payload, Path(out))
            return f"{Fore.GREEN}Wrote {out}"
        return json.dumps(payload, indent=2, sort_keys=True, default=_to_json)

    def _failed_checks(self) -> int:
        return self.report_manager.summary()['failed']

    @help_decorator
    def _cmd_gen(self, args) -> str:
        """Write a named example graph. Usage: gen --family F [--N N ...] [--out g.json]"""
        family = self.validator.validate_family(args.family)
        params = {
            name: self.validator.validate_positive_int(getattr(args, name), name)
            for name in FAMILY_PARAMS
            if getattr(args, name, None) is not None
        }
        graph = gen_example(family, **params)
        self.logger.log_info(f"Generated {family} with {params}")
        return self._emit(graph.to_dict(), args.out)

    @help_decorator
    def _cmd_eval(self, args) -> str:
        """Stretch and jump metrics of a store. Usage: eval --store s.json --graph g.json --t T [--csv f.csv]"""
        t = self.validator.validate_max_length(args.t)
        graph = self._load_graph(args.graph)
        store = store_from_dict(self._load(args.store, 'store'))
        report = evaluate(store, graph, t, self.config)
        if args.csv:
            self.report_manager.save_frame(report.to_frame(), Path(args.csv))
        self.logger.log_metric("stretch_metric", f"t={t}", format_fraction(report.stretch_metric))
        self.logger.log_metric("jump_metric", f"t={t}", report.jump_metric)
        return self._emit(report.to_dict(), args.out)

    @help_decorator
    def _cmd_layout_stretch(self, args) -> str:
        """Folding layout of a sparse Hamiltonian graph. Usage: layout-stretch --graph g.json [--out f]"""
        graph = self._load_graph(args.graph)
        if not isinstance(graph, SparseHamiltonianGraph):
            raise GraphError("layout-stretch needs a sparse Hamiltonian graph (kind 'sham')")
        layout = plan_sham_layout(graph, self.config)
        self._record(CheckResult.bound(
            "folding layout displacement", f"sham(n={graph.n}, k={graph.k})",
            layout.folding_bound, layout.displacement
        ))
        return self._emit(layout.to_dict(), args.out)

    @help_decorator
    def _cmd_layout_jump(self, args) -> str:
        """Path-decomposition layout of a tree. Usage: layout-jump --tree t.json [--root r] [--caterpillar]"""
        tree = self._load_tree(args.tree, args.root)
        decomposition, uf = min_max_decomposition(tree)
        if args.caterpillar:
            store = caterpillar_layout(tree)
        else:
            store = linearize_decomposition(decomposition)
        jump = jump_metric(store, tree, tree.n)
        if not args.caterpillar:
            self._record(CheckResult.bound(
                "decomposition layout jump", f"tree(n={tree.n}, root={tree.root})", 2 * uf - 1, jump
            ))
        payload = {
            'store': store.to_dict(),
            'uf': uf,
            'decomposition': decomposition.to_dict()['paths'],
            'jump_metric': jump,
        }
        return self._emit(payload, args.out)

    @help_decorator
    def _cmd_zerofrag(self, args) -> str:
        """Zero-fragmentation store. Usage: zerofrag --graph g.json --t T [--out f]"""
        t = self.validator.validate_max_length(args.t)
        graph = self._load_graph(args.graph)
        if t == 2:
            result = zero_frag_t2(graph)
            self._record(CheckResult.bound(
                "zero-frag lower bound", f"graph(n={graph.n})", result.length, result.lower_bound
            ))
            return self._emit(result.to_dict(), args.out)
        report = zero_frag_general_report(graph, t)
        self._record(CheckResult(
            "zero-frag envelope", f"graph(n={graph.n}), t={t}",
            f"{format_fraction(report.lower_bound)}..{report.upper_bound}",
            report.store.m, report.within_envelope,
        ))
        return self._emit(report.to_dict(), args.out)

    @help_decorator
    def _cmd_reduce_code(self, args) -> str:
        """Canonical form of a one-redundancy code. Usage: reduce-code --in code.json [--out f]"""
        kind = 'code' if self.validator.load_json(args.input).get("format") == CODE_FORMAT else 'store'
        payload = self._load(args.input, kind)
        if kind == 'code':
            code = HKCode.from_dict(payload)
        else:
            code = HKCode.from_store(store_from_dict(payload))
        canonical = reduce_hk_canonical(code)
        audit = domination_audit(code, canonical)
        self._record(CheckResult.compare(
            "interval domination", f"code(n={code.n}, m={code.m})",
            True, all(a.holds for a in audit)
        ))
        result = {
            'code': canonical.to_dict(),
            'store': canonical.to_store().to_dict(),
            'audit': [a.to_dict() for a in audit],
        }
        return self._emit(result, args.out)

    @help_decorator
    def _cmd_oracle(self, args) -> str:
        """Exact brute-force optimum. Usage: oracle --graph g.json --what W [--t T] [--m M] [--jobs J]"""
        what = self.validator.validate_what(args.what)
        graph = self._load_graph(args.graph)
        jobs = self.validator.validate_positive_int(args.jobs, "jobs") if args.jobs else self.config.jobs
        t = self.validator.validate_max_length(args.t)
        m = self.validator.validate_positive_int(args.m, "m") if args.m else graph.n
        search = ExactSearch(self.config, jobs=jobs)

        if what == 'bandwidth':
            value = search.bandwidth(graph)
        elif what == 'stretch':
            value = search.stretch(graph, t, m)
        elif what == 'jump':
            value = search.jump(graph, t, m)
        elif what == 'zerofrag':
            value = search.zero_frag_length(graph, t)
        else:
            if not isinstance(graph, RootedTree):
                raise GraphError("oracle --what uf needs a rooted tree")
            value = search.min_max_uf(graph)

        payload = {'what': what, 'value': _to_json(value) if isinstance(value, Fraction) else value}
        if what in ('stretch', 'jump'):
            payload.update({'t': t, 'm': m})
        elif what == 'zerofrag':
            payload['t'] = t
        if args.out:
            return self._emit(payload, args.out)
        return f"{Fore.GREEN}{what}: {payload['value']}"

    @help_decorator
    def _cmd_paper_examples(self, args) -> str:
        """Run the fixture suite. Usage: paper-examples [--out report.json] [--slow] [--no-oracle]"""
        result = run_paper_examples(
            self.config,
            include_oracle=not args.no_oracle,
            include_slow=args.slow,
            on_check=self._record,
        )
        self.report_manager.save_to_csv()

        lines = [Fore.CYAN + Style.BRIGHT + "Fixture checks:"]
        for check in result.checks:
            colour = Fore.GREEN if check.passed else Fore.RED
            lines.append(f"{colour}{check}")
        summary = result.to_dict()['summary']
        colour = Fore.GREEN if result.passed else Fore.RED
        lines.append(f"{colour}{summary['passed']}/{summary['total']} passed")
        if args.out:
            payload = result.to_dict()
            payload['input_sha256'] = dict(self.inputs)
            self.report_manager.save_json(payload, Path(args.out))
            lines.append(f"{Fore.GREEN}Wrote {args.out}")
        return "\n".join(lines)

    @help_decorator
    def _cmd_help(self, args) -> str:
        """Display available commands. Usage: help"""
        output = [Fore.CYAN + "Available Commands:"]
        output.append("")

        commands = help_decorator.commands
        for cmd_name, description in sorted(commands.items()):
            output.append(f"{Fore.YELLOW}{cmd_name:15} {Fore.WHITE}- {description}")

        return "\n".join(output)

    def run(self, args: argparse.Namespace) -> int:
        """
        Dispatch one parsed command.

        Returns:
            Process exit status: 0 on success, 1 when a check or a guarantee
            failed, 2 for bad input
        """
        method = getattr(self, f"_cmd_{args.command.replace('-', '_')}")
        try:
            output = method(args)
        except LayoutError as e:
            self.logger.log_error(f"{args.command} failed: {e}")
            print(f"{Fore.RED}Error: {e}")
            return exit_code_for(e)
        print(output)
        return EXIT_FAILED if self._failed_checks() else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per registered command."""
    parser = argparse.ArgumentParser(
        prog='dedup-layout',
        description="Build and check deduplicated chunk-store layouts."
    )
    sub = parser.add_subparsers(dest='command', required=True)
    docs = help_decorator.commands

    gen = sub.add_parser('gen', help=docs['gen'])
    gen.add_argument('--family', required=True)
    for name in FAMILY_PARAMS:
        gen.add_argument(f'--{name}', type=int, dest=name)
    gen.add_argument('--out')

    ev = sub.add_parser('eval', help=docs['eval'])
    ev.add_argument('--store', required=True)
    ev.add_argument('--graph', required=True)
    ev.add_argument('--t', required=True)
    ev.add_argument('--csv')
    ev.add_argument('--out')

    stretch = sub.add_parser('layout-stretch', help=docs['layout-stretch'])
    stretch.add_argument('--graph', required=True)
    stretch.add_argument('--out')

    jump = sub.add_parser('layout-jump', help=docs['layout-jump'])
    jump.add_argument('--tree', required=True)
    jump.add_argument('--root', type=int)
    jump.add_argument('--caterpillar', action='store_true')
    jump.add_argument('--out')

    zf = sub.add_parser('zerofrag', help=docs['zerofrag'])
    zf.add_argument('--graph', required=True)
    zf.add_argument('--t', default='2')
    zf.add_argument('--out')

    reduce = sub.add_parser('reduce-code', help=docs['reduce-code'])
    reduce.add_argument('--in', dest='input', required=True)
    reduce.add_argument('--out')

    oracle = sub.add_parser('oracle', help=docs['oracle'])
    oracle.add_argument('--graph', required=True)
    oracle.add_argument('--what', required=True, help=f"one of {', '.join(ORACLE_TARGETS)}")
    oracle.add_argument('--t', default='2')
    oracle.add_argument('--m')
    oracle.add_argument('--jobs')
    oracle.add_argument('--out')

    paper = sub.add_parser('paper-examples', help=docs['paper-examples'])
    paper.add_argument('--out')
    paper.add_argument('--slow', action='store_true')
    paper.add_argument('--no-oracle', action='store_true', dest='no_oracle')

    sub.add_parser('help', help=docs['help'])
    return parser


def run_cli(argv: Optional[list[str]] = None) -> int:
    """Parse argv and run one command; configuration errors exit with 2."""
    args = build_parser().parse_args(argv)
    try:
        cli = LayoutCLI()
    except ConfigurationError as e:
        print(f"{Fore.RED}Configuration error: {e}")
        return EXIT_BAD_INPUT
    return cli.run(args)


def main():  # pragma: no cover
    """Main entry point."""
    try:
        sys.exit(run_cli())
    except Exception as e:
        print(f"{Fore.RED}Fatal error: {e}")
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    main()
