#!/usr/bin/env python3
"""
Command line for the lkp_stability library.
Applies the L^p, S_r and T_mu operators, certifies root locations, runs the
verification suites, reproduces the worked examples and searches for
counterexamples among negative-rooted inputs.
"""

import os
import sys
import json
import asyncio
import logging
import argparse

from lkp_stability.config import get_config
from lkp_stability.errors import StabilityError, InvalidParameter
from lkp_stability.exactpoly import ExactPolynomial, set_factorial_cap, to_rational
from lkp_stability.lpclass import random_corpus
from lkp_stability.operators import OperatorSpec
from lkp_stability.report import to_jsonable
from lkp_stability.rootcert import approximate_real_roots, certify_all_real_negative, certify_nonnegative
from lkp_stability.search import CounterexampleSearch, RecordWriter, load_records, setup_search_log
from lkp_stability.suites.reproduce import reproduce_all
from lkp_stability.suites.verify import SUITES, run_suite

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger("lkp_stability")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def read_polynomial(value):
    """Polynomial from a JSON file path or an inline JSON argument"""
    text = value
    if os.path.exists(value):
        with open(value, 'r') as f:
            text = f.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidParameter(f"--input is neither a readable file nor JSON: {str(e)}") from e
    if isinstance(data, list):
        data = {"coeffs": data}
    return ExactPolynomial.from_dict(data)


def parse_mu(value):
    """--mu as a JSON list or comma separated rationals"""
    value = value.strip()
    if value.startswith('['):
        try:
            items = json.loads(value)
        except json.JSONDecodeError as e:
            raise InvalidParameter(f"--mu is not a JSON list: {str(e)}") from e
    else:
        items = [item.strip() for item in value.split(',') if item.strip()]
    return [to_rational(str(item)) for item in items]


def rational_arg(value):
    try:
        return to_rational(value)
    except InvalidParameter as e:
        raise argparse.ArgumentTypeError(str(e))


def parse_degree_range(value):
    try:
        lo, hi = value.split(':')
        return int(lo), int(hi)
    except ValueError:
        raise InvalidParameter(f"degree range must look like A:B, got '{value}'")


def operator_from_args(args):
    """OperatorSpec from --op and its parameter flag"""
    if args.op == 'Lkp':
        if args.p is None:
            raise InvalidParameter("--op Lkp needs --p")
        return OperatorSpec.lkp(args.p)
    if args.op == 'Sr':
        if args.r is None:
            raise InvalidParameter("--op Sr needs --r")
        return OperatorSpec.sr(args.r)
    if args.mu is None:
        raise InvalidParameter("--op Tmu needs --mu")
    return OperatorSpec.tmu(parse_mu(args.mu))


def emit(args, payload, text):
    """Print the structured payload as JSON or its text rendering"""
    if getattr(args, 'output', 'json') == 'text':
        print(text)
    else:
        print(json.dumps(to_jsonable(payload), indent=2))


def cmd_apply(args, config):
    spec = operator_from_args(args)
    psi = read_polynomial(args.input)
    output = spec.apply(psi)
    payload = {"operator": spec.to_dict(), "input": psi, "output": output}
    emit(args, payload, f"{spec.label()}[{psi}] = {output}")
    return EXIT_OK


def cmd_certify(args, config):
    p = read_polynomial(args.input)
    certificate = certify_all_real_negative(p)
    nonnegativity = certify_nonnegative(p)
    payload = {"input": p, "certificate": certificate.to_dict(), "nonnegativity": nonnegativity.to_dict()}
    if args.width is not None:
        payload["roots"] = [[lo, hi, m] for lo, hi, m in approximate_real_roots(p, args.width)]
    lines = [
        f"{p}",
        f"  verdict: {certificate.verdict.value} (real {certificate.real_root_count}, "
        f"non-real {certificate.nonreal_count})",
        f"  nonnegativity: {nonnegativity.verdict.value}",
    ]
    emit(args, payload, "\n".join(lines))
    return EXIT_OK


async def cmd_verify(args, config):
    loop = asyncio.get_event_loop()
    report = await loop.run_in_executor(None, run_suite, args.suite, args.max, args.seed, config)
    emit(args, report.to_dict(), report.render_text())
    return EXIT_OK if report.passed else EXIT_FAILURE


async def cmd_reproduce(args, config):
    loop = asyncio.get_event_loop()
    report = await loop.run_in_executor(None, reproduce_all)
    text = "\n".join(render_check(check) for check in report.details["checks"])
    emit(args, report.to_dict(), text)
    return EXIT_OK if report.passed else EXIT_FAILURE


def render_check(data):
    """One line per reproduced check"""
    status = "PASS" if data["pass"] else "FAIL"
    return f"[{status}] {data['identity']}"


async def cmd_search(args, config):
    if args.seed is None:
        raise InvalidParameter("search needs an explicit --seed")
    settings = config.get('search', {})
    setup_search_log(settings.get('log_file', '/tmp/lkp-stability/search.log'))
    spec = operator_from_args(args)
    out_path = args.out or settings.get('output', 'search-records.jsonl')

    search = CounterexampleSearch(spec, args.seed, args.budget, args.budget_type, args.strategy, config)
    writer = RecordWriter(out_path)
    search.add_record_callback(writer)
    records = await search.run()

    if records:
        # everything in the file must still reproduce
        load_records(out_path)
        logger.info(f"{len(records)} counterexample records written to {out_path}")
    payload = {
        "operator": spec.to_dict(),
        "seed": args.seed,
        "checked": search.checked,
        "skipped": search.skipped,
        "records": [r.to_dict() for r in records],
    }
    emit(args, payload, f"{spec.label()}: {search.checked} checked, {len(records)} counterexamples")
    return EXIT_FAILURE if records else EXIT_OK


def cmd_corpus(args, config):
    if args.seed is None:
        raise InvalidParameter("corpus needs an explicit --seed")
    settings = config.get('search', {})
    degree_range = parse_degree_range(args.degree) if args.degree else tuple(settings.get('degree_range', (1, 12)))
    rho_bound = args.rho_bound or int(settings.get('rho_bound', 20))
    members = random_corpus(args.seed, args.count, degree_range, rho_bound)
    lines = [json.dumps(dict(member.to_dict(), index=i)) for i, member in enumerate(members)]
    if args.out:
        with open(args.out, 'w') as f:
            f.write("\n".join(lines) + "\n")
        logger.info(f"Wrote {len(lines)} corpus members to {args.out}")
    else:
        print("\n".join(lines))
    return EXIT_OK


def build_parser():
    """Argument parser with the global options accepted before or after the subcommand"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--output', choices=['json', 'text'], default=argparse.SUPPRESS, help='Output format')
    common.add_argument('--config', type=str, default=argparse.SUPPRESS, help='Path to configuration file')
    common.add_argument('--debug', action='store_true', default=argparse.SUPPRESS, help='Enable debug logging')
    common.add_argument('--seed', type=int, default=argparse.SUPPRESS, help='Seed for randomized commands')

    parser = argparse.ArgumentParser(description='Exact stability-preserving operators on polynomials',
                                     parents=[common])
    subparsers = parser.add_subparsers(dest='command', required=True)

    def add_operator_args(sub):
        sub.add_argument('--op', choices=['Lkp', 'Sr', 'Tmu'], required=True, help='Operator kind')
        sub.add_argument('--p', type=int, help='p of L^p')
        sub.add_argument('--r', type=int, help='r of S_r')
        sub.add_argument('--mu', type=str, help='T_mu weights, e.g. "1,0,-1"')

    apply_parser = subparsers.add_parser('apply', parents=[common], help='Apply an operator to a polynomial')
    add_operator_args(apply_parser)
    apply_parser.add_argument('--input', required=True, help='Polynomial JSON file or inline JSON')

    certify_parser = subparsers.add_parser('certify', parents=[common], help='Certify root location')
    certify_parser.add_argument('--input', required=True, help='Polynomial JSON file or inline JSON')
    certify_parser.add_argument('--width', type=rational_arg, help='Also enclose real roots to this width')

    verify_parser = subparsers.add_parser('verify', parents=[common], help='Run a verification suite')
    verify_parser.add_argument('--suite', choices=sorted(SUITES) + ['all'], required=True)
    verify_parser.add_argument('--max', type=int, help='Suite size bound')

    subparsers.add_parser('reproduce', parents=[common], help='Reproduce the worked examples')

    search_parser = subparsers.add_parser('search', parents=[common], help='Search for counterexamples')
    add_operator_args(search_parser)
    search_parser.add_argument('--budget', type=int, required=True, help='Candidate count or seconds')
    search_parser.add_argument('--budget-type', choices=['count', 'seconds'], default='count')
    search_parser.add_argument('--strategy', choices=['random', 'structured'], default='random')
    search_parser.add_argument('--out', type=str, help='JSONL file records are appended to')

    corpus_parser = subparsers.add_parser('corpus', parents=[common], help='Generate a seeded corpus')
    corpus_parser.add_argument('--count', type=int, required=True)
    corpus_parser.add_argument('--degree', type=str, help='Degree range A:B')
    corpus_parser.add_argument('--rho-bound', type=int, help='Bound on rho numerators and denominators')
    corpus_parser.add_argument('--out', type=str, help='Write JSONL here instead of stdout')
    return parser


COMMANDS = {
    'apply': cmd_apply,
    'certify': cmd_certify,
    'verify': cmd_verify,
    'reproduce': cmd_reproduce,
    'search': cmd_search,
    'corpus': cmd_corpus,
}


async def main_async(args):
    """Main async entry point"""
    config = get_config(args.config)
    if not config:
        logger.error("No valid configuration found. Exiting.")
        return EXIT_USAGE
    set_factorial_cap(int(config.get('cache', {}).get('factorial_cap', 512)))

    command = COMMANDS[args.command]
    try:
        if asyncio.iscoroutinefunction(command):
            return await command(args, config)
        return command(args, config)
    except InvalidParameter as e:
        logger.error(f"Invalid input: {str(e)}")
        return EXIT_USAGE
    except StabilityError as e:
        logger.error(f"{type(e).__name__}: {str(e)}")
        return EXIT_FAILURE


def cmd_dispatch(argv=None):
    """Parse arguments, run the subcommand and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    for name, default in (('output', 'json'), ('config', None), ('debug', False), ('seed', None)):
        if not hasattr(args, name):
            setattr(args, name, default)

    if args.debug:
        logger.setLevel(logging.DEBUG)
        logging.getLogger('lkp_search').setLevel(logging.DEBUG)

    try:
        return asyncio.run(main_async(args))
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_FAILURE
    except Exception as e:
        logger.error(f"Unhandled exception: {str(e)}")
        return EXIT_FAILURE


def main():
    """Main entry point"""
    sys.exit(cmd_dispatch())


if __name__ == '__main__':
    main()
