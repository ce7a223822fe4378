'''Command line front end: evaluate corpora, translate sentences, run the
verification suites, list finite objects and compute depths.

Exit codes: 0 success, 1 a value disagreed with its expectation or a suite
failed, 2 usage or parse error, 3 a resource cap was hit.
'''
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .corpus import CorpusEntry, read_corpus_file
from .endoring import DEFAULT_RING_CAP, RingTable, image, is_primitive_idempotent
from .errors import EndotheoryError, FormulaSyntaxError, ResourceCapError, SignatureError
from .evaluation import Evaluator
from .formulas import parse_many, pretty, to_sexp
from .pgroup import PGroupShape, enumerate_subgroups
from .shelah import FunctionGraph, depth_map, enumerate_beautiful
from .structures import DEFAULT_SO_ENUM_CAP, group_structure, ring_structure
from .translate import translate_theorem42, translate_theorem43
from .verify import SUITES, run_suite

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

DEFAULTS = {
    'max-group-order': 64,
    'max-ring-size': DEFAULT_RING_CAP,
    'so-enum-cap': DEFAULT_SO_ENUM_CAP,
    'workers': 1,
    'method': '42',
    'hints': True,
}
_INT_KEYS = ('max-group-order', 'max-ring-size', 'so-enum-cap', 'workers')


class UsageError(EndotheoryError):
    pass


# ---------------------------------------------------------------- configuration

def read_config(path: str | None) -> dict:
    '''`key=value` lines; blank lines and lines starting with # are skipped.'''
    if path is None:
        return {}
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        key, sep, value = line.partition('=')
        key, value = key.strip(), value.strip()
        if not sep or key not in DEFAULTS:
            raise UsageError(f'{path}:{n}: unknown setting {key!r}')
        if key in _INT_KEYS:
            try:
                out[key] = int(value)
            except ValueError:
                raise UsageError(f'{path}:{n}: {key} needs an integer') from None
        elif key == 'hints':
            if value.lower() not in ('true', 'false', 'yes', 'no', '1', '0'):
                raise UsageError(f'{path}:{n}: hints needs true or false')
            out[key] = value.lower() in ('true', 'yes', '1')
        else:
            out[key] = value
    return out


def resolve_settings(args) -> dict:
    '''Flags over config file over defaults.'''
    settings = dict(DEFAULTS)
    settings.update(read_config(getattr(args, 'config', None)))
    flags = {
        'max-group-order': getattr(args, 'max_group_order', None),
        'max-ring-size': getattr(args, 'max_ring_size', None),
        'so-enum-cap': getattr(args, 'so_enum_cap', None),
        'workers': getattr(args, 'workers', None),
        'method': getattr(args, 'method', None),
        'hints': False if getattr(args, 'no_hints', False) else None,
    }
    settings.update({k: v for k, v in flags.items() if v is not None})
    if settings['method'] not in ('42', '43'):
        raise UsageError(f'method must be 42 or 43, not {settings["method"]!r}')
    return settings


def _shape(spec: str, settings: dict) -> PGroupShape:
    try:
        shape = PGroupShape.parse(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if shape.order > settings['max-group-order']:
        raise ResourceCapError(f'group order {shape.order} exceeds max-group-order {settings["max-group-order"]}')
    return shape


# ---------------------------------------------------------------- output

def emit(rows: list[dict], fmt: str, out, columns: list[str] | None = None) -> None:
    if fmt == 'csv':
        cols = columns or sorted({k for r in rows for k in r})
        w = csv.DictWriter(out, fieldnames=cols, extrasaction='ignore', lineterminator='\n')
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})
    else:
        for r in rows:
            out.write(json.dumps(r, sort_keys=True) + '\n')


# ---------------------------------------------------------------- eval

def _eval_job(job) -> dict:
    '''One (entry, structure) evaluation; runs in a worker process when asked.'''
    entry_id, sentence, kind, spec, expected, settings, timing = job
    row = {'id': entry_id, 'structure': spec, 'kind': kind}
    start = time.perf_counter()
    try:
        shape = PGroupShape.parse(spec)
        S = ring_structure(shape, settings['max-ring-size']) if kind == 'ring' else group_structure(shape)
        ev = Evaluator(S, so_enum_cap=settings['so-enum-cap'], use_hints=settings['hints'])
        f = parse_many(sentence)[0]
        value = ev.evaluate(f)
        stats = ev.stats.as_dict()
        stats.pop('wall_time', None)
        row.update(value=value, stats=stats)
        if expected is not None:
            row['expected'] = expected
            row['agrees'] = value == expected
    except ResourceCapError as exc:
        row['error'] = f'resource cap: {exc}'
    except EndotheoryError as exc:
        row['error'] = str(exc)
    if timing:
        row['seconds'] = round(time.perf_counter() - start, 6)
    return row


def _eval_jobs(entries: list[CorpusEntry], group: str | None, ring: str | None, settings: dict, timing: bool):
    jobs = []
    for e in entries:
        if group or ring:
            spec = group or ring
            kind = 'ring' if ring else 'group'
            jobs.append((e.id, e.sentence, kind, str(_shape(spec, settings)), e.expected.get(spec), settings, timing))
        else:
            kind = 'ring' if e.language == 'ring' else 'group'
            for spec in e.expected:
                _shape(spec, settings)
                jobs.append((e.id, e.sentence, kind, spec, e.expected[spec], settings, timing))
    return jobs


def cmd_eval(args, settings, out) -> int:
    if args.group and args.ring:
        raise UsageError('give --group or --ring, not both')
    entries = []
    for path in args.files:
        entries.extend(read_corpus_file(path))
    jobs = _eval_jobs(entries, args.group, args.ring, settings, args.timing)
    if settings['workers'] > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=settings['workers']) as pool:
            rows = list(pool.map(_eval_job, jobs))     # map keeps input order
    else:
        rows = [_eval_job(j) for j in jobs]
    emit(rows, args.format, out, ['id', 'structure', 'kind', 'value', 'expected', 'agrees', 'error'])
    if any('error' in r and r['error'].startswith('resource cap') for r in rows):
        return EXIT_CAP
    if any('error' in r for r in rows):
        return EXIT_USAGE
    if any(r.get('agrees') is False for r in rows):
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------- translate

def cmd_translate(args, settings, out) -> int:
    method = settings['method']
    p = args.prime
    if method == '43' and p is None:
        if not args.group:
            raise UsageError('method 43 needs --prime or --group to fix p')
        p = _shape(args.group, settings).p
    for path in args.files:
        for e in read_corpus_file(path):
            phi = e.formula
            psi = translate_theorem42(phi) if method == '42' else translate_theorem43(phi, p)
            text = pretty(psi) if args.pretty else to_sexp(psi)
            if args.format == 'json':
                out.write(json.dumps({'id': e.id, 'method': method, 'translation': text}, sort_keys=True) + '\n')
            else:
                out.write(text + '\n')
    return EXIT_OK


# ---------------------------------------------------------------- verify

def cmd_verify(args, settings, out) -> int:
    rep = run_suite(args.suite, max_order=args.max_group_order, so_enum_cap=settings['so-enum-cap'])
    d = rep.as_dict(timing=args.timing)
    if args.format == 'csv':
        rows = [{'suite': d['suite'], 'check': k, 'checked': v['checked'], 'failed': v['failed']}
                for k, v in d['checks'].items()]
        emit(rows, 'csv', out, ['suite', 'check', 'checked', 'failed'])
    else:
        out.write(json.dumps(d, sort_keys=True) + '\n')
    return EXIT_OK if rep.ok else EXIT_MISMATCH


# ---------------------------------------------------------------- enumerate

def cmd_enumerate(args, settings, out) -> int:
    rows = []
    if args.what == 'beautiful':
        for k in enumerate_beautiful(args.n, args.prime, args.l):
            rows.append({'coefficients': list(k), 'n': args.n, 'p': args.prime, 'l': args.l})
        emit(rows, args.format, out, ['n', 'p', 'l', 'coefficients'])
        return EXIT_OK
    if not args.group:
        raise UsageError(f'enumerate {args.what} needs --group')
    shape = _shape(args.group, settings)
    if args.what == 'subgroups':
        for H in enumerate_subgroups(shape, settings['max-group-order']):
            rows.append({'group': str(shape), 'order': H.order, 'elements': [str(x) for x in H]})
        emit(rows, args.format, out, ['group', 'order', 'elements'])
        return EXIT_OK
    T = RingTable(shape, settings['max-ring-size'])
    if args.what == 'endos':
        for i, f in enumerate(T):
            rows.append({'group': str(shape), 'index': i, 'matrix': [list(r) for r in f.matrix]})
        emit(rows, args.format, out, ['group', 'index', 'matrix'])
    else:
        for i in T.idempotent_indices:
            f = T.elements[i]
            rows.append({'group': str(shape), 'index': i, 'matrix': [list(r) for r in f.matrix],
                         'primitive': is_primitive_idempotent(f, T), 'image_order': image(f).order})
        emit(rows, args.format, out, ['group', 'index', 'matrix', 'primitive', 'image_order'])
    return EXIT_OK


# ---------------------------------------------------------------- depth

def cmd_depth(args, settings, out) -> int:
    h = FunctionGraph.parse(args.graph)
    d = depth_map(h)
    points = [args.x] if args.x is not None else list(h.domain)
    rows = []
    for x in points:
        if x not in d:
            raise UsageError(f'{x} is not in the domain')
        rows.append({'x': x, 'image': h(x), 'depth': 'inf' if d[x] == float('inf') else d[x]})
    emit(rows, args.format, out, ['x', 'image', 'depth'])
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='file of key=value settings')
    common.add_argument('--json', dest='format', action='store_const', const='json', default=None,
                        help='JSON lines output (the default except for translate)')
    common.add_argument('--csv', dest='format', action='store_const', const='csv', help='CSV output')
    common.add_argument('--max-group-order', '--max-order', dest='max_group_order', type=int)
    common.add_argument('--max-ring-size', type=int)
    common.add_argument('--so-enum-cap', type=int, help='largest |A|^arity a full predicate range may have')
    common.add_argument('--workers', type=int)
    common.add_argument('--no-hints', action='store_true', help='enumerate guarded ranges in full')
    common.add_argument('--timing', action='store_true', help='add wall-clock durations to the report')

    ap = argparse.ArgumentParser(prog='endotheory', description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest='command', required=True)

    p = sub.add_parser('eval', parents=[common], help='evaluate sentences')
    p.add_argument('files', nargs='+')
    p.add_argument('--group', help='group spec such as "p=2;exps=1,2"')
    p.add_argument('--ring', help='group spec whose endomorphism ring is the model')
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser('translate', parents=[common], help='translate ring sentences into group sentences')
    p.add_argument('files', nargs='+')
    p.add_argument('--method', choices=['42', '43'])
    p.add_argument('--prime', type=int, help='the prime of the group (method 43)')
    p.add_argument('--group', help='take the prime from this group spec')
    p.add_argument('--pretty', action='store_true', help='indent the output')
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser('verify', parents=[common], help='run an invariant suite')
    p.add_argument('suite', choices=SUITES)
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser('enumerate', parents=[common], help='list endomorphisms, idempotents, subgroups or '
                                                           'beautiful combinations')
    p.add_argument('what', choices=['endos', 'idempotents', 'subgroups', 'beautiful'])
    p.add_argument('--group')
    p.add_argument('--n', type=int, default=2)
    p.add_argument('--prime', type=int, default=2)
    p.add_argument('--l', type=int, default=1)
    p.set_defaults(run=cmd_enumerate)

    p = sub.add_parser('depth', parents=[common], help='depth of points under a self-map')
    p.add_argument('graph', help='"domain=1..n; map=h(1),...,h(n)"')
    p.add_argument('--x', type=int, help='report one point only')
    p.set_defaults(run=cmd_depth)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        settings = resolve_settings(args)
        return args.run(args, settings, out)
    except ResourceCapError as exc:
        print(f'endotheory: resource cap: {exc}', file=sys.stderr)
        return EXIT_CAP
    except (FormulaSyntaxError, SignatureError, UsageError, OSError, json.JSONDecodeError) as exc:
        print(f'endotheory: {exc}', file=sys.stderr)
        return EXIT_USAGE
    except EndotheoryError as exc:
        print(f'endotheory: {exc}', file=sys.stderr)
        return EXIT_USAGE


def run(argv=None) -> tuple[int, str]:
    '''main() with captured output, for tests and scripting.'''
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == '__main__':
    sys.exit(main())
