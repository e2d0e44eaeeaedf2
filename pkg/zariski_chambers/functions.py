import configparser
import csv
import json
import logging
import os
import sys
from argparse import Namespace
from typing import TextIO

from .chambers import (ChamberCensus, NotAChamberError, chamber_representative, census, verify_invariants,
                       verify_tables)
from .DataWriter import writer_for_path
from .delpezzo import DivisorClass, intersection_matrix
from .enumerator import count_posdef, enumerate_posdef
from .enums import EnumerationMode, OutputFormat, SearchEngine
from .exactalg import IndexSet, InvalidArgumentError
from .helpers import format_fraction, get_config_path, load_matrix_file, parse_int_list, parse_labels
from .ProgressBar import TerminalProgressBar

logger = logging.getLogger('zariski_chambers')


def parse_config() -> configparser.ConfigParser:
    config = configparser.ConfigParser()
    config_file = os.path.join(get_config_path(), 'config.ini')

    logger.debug('Reading config file located at: %s', config_file)
    config.read(config_file)

    default_config = {
        'Enumeration': {
            'engine': SearchEngine.INCREMENTAL.value,
            'threads': '1',
            'oracle_limit': '20',
        },
        'Output': {
            'format': OutputFormat.TEXT.value,
        },
        'Logging': {
            'level': 'INFO',
            'backup_count': '20',
        },
    }

    for section, options in default_config.items():
        if not config.has_section(section):
            config.add_section(section)
        for option, value in options.items():
            if not config.has_option(section, option) or config.get(section, option) == '':
                config.set(section, option, value)

    return config


def _engine(args: Namespace, config: configparser.ConfigParser) -> SearchEngine:
    value = getattr(args, 'engine', None) or config.get('Enumeration', 'engine')
    try:
        return SearchEngine(value)
    except ValueError:
        raise InvalidArgumentError(f'unknown engine {value!r}') from None


def _threads(args: Namespace, config: configparser.ConfigParser) -> int:
    threads = getattr(args, 'threads', None)
    if threads is None:
        threads = config.getint('Enumeration', 'threads')
    if threads < 1:
        raise InvalidArgumentError(f'threads must be positive, got {threads}')
    return threads


def _format(args: Namespace, config: configparser.ConfigParser) -> OutputFormat:
    value = getattr(args, 'format', None) or config.get('Output', 'format')
    try:
        return OutputFormat(value)
    except ValueError:
        raise InvalidArgumentError(f'unknown output format {value!r}') from None


def _write_census(result: ChamberCensus, output_format: OutputFormat, per_cardinality: bool, out: TextIO) -> None:
    values = result.to_dict()
    if output_format == OutputFormat.JSON:
        json.dump(values, out, indent=2)
        out.write('\n')
        return

    if not per_cardinality:
        del values['per_cardinality']
    if output_format == OutputFormat.CSV:
        writer = csv.writer(out)
        writer.writerow(values.keys())
        writer.writerow(values.values())
    else:
        for key, value in values.items():
            out.write(f'{key} = {value}\n')


def cmd_delpezzo(args: Namespace, config: configparser.ConfigParser, out: TextIO = None) -> int:
    out = out or sys.stdout
    output_format = _format(args, config)
    engine = _engine(args, config)
    pbar = TerminalProgressBar(message=f'X_{args.r}')

    if args.emit_supports:
        model = intersection_matrix(args.r)
        logger.info('Writing chamber supports to: %s', args.emit_supports)
        with open(args.emit_supports, 'w', encoding='utf-8') as supports_file:

            def emit(support: IndexSet) -> None:
                supports_file.write(' '.join(model.support_labels(support)) + '\n')

            result = census(args.r, engine=engine, pbar=pbar, visit=emit)
    else:
        result = census(args.r, threads=_threads(args, config), engine=engine, pbar=pbar)

    _write_census(result, output_format, args.per_cardinality, out)
    return 0


def cmd_enumerate(args: Namespace, config: configparser.ConfigParser, out: TextIO = None) -> int:
    out = out or sys.stdout
    output_format = _format(args, config)
    engine = _engine(args, config)
    matrix = load_matrix_file(args.matrix_file)
    if EnumerationMode(args.mode) == EnumerationMode.NEGDEF:
        matrix = -matrix

    if args.count_only:
        result = count_posdef(matrix, threads=_threads(args, config), engine=engine)
        summary = {
            'count': result.count,
            'per_cardinality': result.per_cardinality,
            'det_evaluations': result.stats.det_evaluations,
            'max_cardinality': result.stats.max_cardinality,
        }
        if output_format == OutputFormat.JSON:
            json.dump(summary, out, indent=2)
            out.write('\n')
        else:
            out.write(f'{result.count}\n')
            out.write(f'# det_evaluations = {result.stats.det_evaluations}\n')
        return 0

    if output_format == OutputFormat.JSON:
        sets = []
        stats = enumerate_posdef(matrix, sets.append, engine=engine)
        json.dump({'sets': [list(S) for S in sets], 'sets_emitted': stats.sets_emitted,
                   'det_evaluations': stats.det_evaluations, 'max_cardinality': stats.max_cardinality}, out)
        out.write('\n')
        return 0

    separator = ',' if output_format == OutputFormat.CSV else ' '
    stats = enumerate_posdef(matrix, lambda S: out.write(separator.join(str(i) for i in S) + '\n'), engine=engine)
    out.write(f'# sets_emitted = {stats.sets_emitted}\n')
    out.write(f'# det_evaluations = {stats.det_evaluations}\n')
    out.write(f'# max_cardinality = {stats.max_cardinality}\n')
    return 0


def cmd_matrix(args: Namespace, config: configparser.ConfigParser, out: TextIO = None) -> int:
    out = out or sys.stdout
    model = intersection_matrix(args.r)
    output_format = _format(args, config)

    if output_format == OutputFormat.JSON:
        json.dump({'r': model.r, 'labels': model.labels, 'matrix': model.matrix.tolist()}, out)
        out.write('\n')
    elif output_format == OutputFormat.CSV:
        writer = csv.writer(out)
        writer.writerow([''] + model.labels)
        for label, row in zip(model.labels, model.matrix.tolist()):
            writer.writerow([label] + row)
    else:
        out.write(model.to_text())

    if args.sidecar:
        with open(args.sidecar, 'w', encoding='utf-8') as sidecar:
            sidecar.write(model.sidecar_text())
        logger.info('Curve labels stored in file: %s', args.sidecar)
    return 0


def _export_report(report, file_path: str) -> None:
    with writer_for_path(file_path) as data_writer:
        check_headers = ['check', 'r', 'expected', 'measured', 'status', 'detail']
        data_writer.create_table(check_headers, 'checks')
        data_writer.add_rows([{
            'check': check.name,
            'r': check.r,
            'expected': check.expected,
            'measured': check.measured,
            'status': check.status.value,
            'detail': check.detail,
        } for check in report.checks], 'checks')

        census_headers = ['r', 'z', 'negdef_count', 'per_cardinality', 'max_support', 'det_evaluations',
                          'wall_time_ms']
        data_writer.create_table(census_headers, 'census')
        data_writer.add_rows([result.to_dict() for result in report.censuses], 'census')


def cmd_verify(args: Namespace, config: configparser.ConfigParser, out: TextIO = None) -> int:
    out = out or sys.stdout
    oracle_limit = args.oracle_limit
    if oracle_limit is None:
        oracle_limit = config.getint('Enumeration', 'oracle_limit')
    if oracle_limit < 1:
        raise InvalidArgumentError(f'oracle limit must be positive, got {oracle_limit}')
    pbar = TerminalProgressBar(message='Verifying')

    report = verify_tables(args.max_r, threads=_threads(args, config), engine=_engine(args, config), pbar=pbar)
    report.extend(verify_invariants(args.max_r, oracle_limit=oracle_limit))

    out.write(report.format_text() + '\n')
    if args.export:
        _export_report(report, args.export)

    if not report.passed:
        logger.error('Verification failed')
        return 1
    logger.info('Verification passed (%s checks)', len(report.checks))
    return 0


def _parse_ample(r: int, spec: str) -> DivisorClass:
    values = parse_int_list(spec)
    if len(values) != r + 1:
        raise InvalidArgumentError(f'ample class on X_{r} needs {r + 1} integers d,m1,...,m{r}, got {len(values)}')
    return DivisorClass(r, values[0], tuple(values[1:]))


def cmd_rep(args: Namespace, config: configparser.ConfigParser, out: TextIO = None) -> int:
    out = out or sys.stdout
    model = intersection_matrix(args.r)
    support = [model.index_of(label) for label in parse_labels(args.support)]
    ample = _parse_ample(args.r, args.ample) if args.ample else None

    try:
        rep = chamber_representative(args.r, support, ample)
    except NotAChamberError as err:
        logger.info('%s', err)
        raise NotAChamberError(f'not a Zariski chamber support: {args.support}') from None

    out.write(f'support = {", ".join(rep.labels)}\n')
    out.write(f'ample = {rep.ample}\n')
    out.write(f'a = {", ".join(format_fraction(value) for value in rep.a)}; P = {rep.P}\n')
    out.write(f'k_scale = {rep.k_scale}\n')
    out.write(f'N = {rep.negative_part()}\n')
    if args.primitive:
        factor, primitive = rep.primitive()
        out.write(f'primitive = {primitive} ({format_fraction(factor)} P)\n')
    return 0
