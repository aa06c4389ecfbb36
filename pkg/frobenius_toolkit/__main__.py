"""
Main entry point for the Frobenius Toolkit.

This module provides a command-line interface that builds supports and
functionals, certifies them, and emits JSON certificates, DOT graphs and
wedge expressions. Exit codes: 0 when the certification succeeds, 1 on a
mathematical negative, 2 on a usage error.
"""

import argparse
import json
import logging
import random
import sys
from typing import List, Optional, Tuple

import networkx as nx

from frobenius_toolkit.algebra.cybe import (
    WedgeTwo,
    cybe_check,
    defining_property_holds,
    format_wedge,
    lagrangian_split,
    peel_form_graph,
    r_from_lagrangian,
    r_matrix_for,
)
from frobenius_toolkit.algebra.functionals import (
    FAMILIES,
    PrincipalElement,
    check_principal,
    family_support,
    gamma_graph,
    is_rooted_tree,
    is_tree,
    meander_census,
    principal_candidate,
)
from frobenius_toolkit.algebra.mcybe import (
    DegenerationError,
    degeneration_limit,
    find_separating_h,
    root_progression,
)
from frobenius_toolkit.algebra.sln import (
    Functional,
    LieSupport,
    is_frobenius,
    kirillov_matrix,
    parabolic_support,
    random_functional,
    seaweed_support,
)
from frobenius_toolkit.graphs.dot import form_graph_dot, gamma_dot, graph_dot
from frobenius_toolkit.graphs.form_graph import build_form_graph, component_summary, form_index, rooted_components_check
from frobenius_toolkit.graphs.local_ring import (
    AmbiguousR3,
    graph_connected,
    nilpotence_index,
    present,
    radical_power_dims,
    reconstruct,
    reduced_radical_dims,
)
from frobenius_toolkit.linalg.rational_matrix import SingularMatrixError
from frobenius_toolkit.utils.config import get_settings
from frobenius_toolkit.utils.helpers import (
    dump_json,
    json_envelope,
    load_json_document,
    parse_rational,
    write_text_output,
)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

Outcome = Tuple[int, str]


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _pair(text: str) -> Tuple[int, int]:
    values = _int_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected a pair i,j, got {text!r}")
    return values[0], values[1]


def _edges(text: str) -> List[Tuple[str, str]]:
    edges = []
    for item in text.split(","):
        u, sep, v = item.strip().partition("-")
        if not sep or not u or not v:
            raise argparse.ArgumentTypeError(f"expected edges like 0-1,1-2, got {text!r}")
        edges.append((u, v))
    return edges


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--n', type=int, help='Matrix size n')
    common.add_argument('--m', type=int, help='Block size m of the parabolic P(n, m)')
    common.add_argument('--family', choices=FAMILIES + ('random',), default='cyclic', help='Functional family')
    common.add_argument('--seed', type=int, help='Seed for sampled functionals')
    common.add_argument('--format', choices=['json', 'dot', 'text'], default='json', help='Output format')
    common.add_argument('--out', help='Write the artifact to this file instead of stdout')
    common.add_argument('--verbose', action='store_true', help='Log at DEBUG level')
    common.add_argument('--quiet', action='store_true', help='Log warnings and errors only')

    parser = argparse.ArgumentParser(
        prog='frobenius-toolkit',
        description='Frobenius functionals, r-matrices and graphs on parabolic subalgebras of sl(n)'
    )
    subparsers = parser.add_subparsers(dest='command', help='Command to run')

    subparsers.add_parser('support', parents=[common], help='Print the support S of a functional family')
    subparsers.add_parser('gamma', parents=[common], help='The small graph gamma(S)')
    subparsers.add_parser('biggraph', parents=[common], help='The graph Γ(S) of the Kirillov form')
    subparsers.add_parser('principal', parents=[common], help='Principal element of F_S')
    subparsers.add_parser('check-frobenius', parents=[common], help='Certify B_F nondegenerate on P(n, m)')

    rmatrix_parser = subparsers.add_parser('rmatrix', parents=[common], help='r-matrix of a Frobenius functional')
    rmatrix_parser.add_argument('--method', choices=['invert', 'lagrangian', 'peel'], default='invert')
    rmatrix_parser.add_argument('--verify-cybe', action='store_true', help='Also check the classical Yang-Baxter equation')

    meander_parser = subparsers.add_parser('meander', parents=[common], help='Meander index of a seaweed')
    meander_parser.add_argument('--top', type=_int_list, help='Top composition, e.g. 3,2')
    meander_parser.add_argument('--bottom', type=_int_list, help='Bottom composition, e.g. 5')
    meander_parser.add_argument('--parabolic', type=_pair, help='Maximal parabolic n,m')

    mcybe_parser = subparsers.add_parser('mcybe', parents=[common], help='Root progressions and their degenerations')
    mcybe_parser.add_argument('action', choices=['progression', 'degenerate', 'separating-h'])
    mcybe_parser.add_argument('--h', type=lambda text: [parse_rational(v) for v in text.split(',')],
                              help='Diagonal of h, comma separated (default: the principal element)')
    mcybe_parser.add_argument('--keep', type=_pair, action='append', default=[],
                              help='Mapped pair i,j to keep; repeat for several')

    ring_parser = subparsers.add_parser('localring', parents=[common], help='Local ring of a graph')
    ring_parser.add_argument('action', choices=['dims', 'reconstruct', 'reduced'])
    ring_parser.add_argument('--edges', type=_edges, required=True, help='Edges u-v, comma separated; u-v is oriented u -> v')

    verify_parser = subparsers.add_parser('verify', parents=[common], help='Re-validate an emitted JSON certificate')
    verify_parser.add_argument('--in', dest='in_file', required=True, help='Certificate file')

    sweep_parser = subparsers.add_parser('sweep', parents=[common], help='Run a named invariant over an (n, m) grid')
    sweep_parser.add_argument('--name', required=True, help='Sweep name')
    sweep_parser.add_argument('--n-max', type=int, default=10, help='Largest n')
    sweep_parser.add_argument('--report', help='Report file (.xlsx or .csv)')

    return parser


def _require_nm(args) -> Tuple[int, int]:
    if args.n is None or args.m is None:
        raise ValueError(f"'{args.command}' needs --n and --m")
    return args.n, args.m


def _support(args) -> Tuple[LieSupport, frozenset]:
    n, m = _require_nm(args)
    if args.family == 'random':
        raise ValueError("The random family has no fixed support")
    return parabolic_support(n, m), family_support(args.family, n, m)


def _functional(args, g: LieSupport, S) -> Functional:
    if args.family == 'random':
        seed = get_settings().seed if args.seed is None else args.seed
        return random_functional(g, random.Random(seed))
    return Functional.from_support(S)


def _pairs_json(S) -> list:
    return [list(p) for p in sorted(S)]


def _require_format(args, *allowed: str) -> None:
    if args.format not in allowed:
        raise ValueError(f"'{args.command}' supports --format {', '.join(allowed)}, not {args.format}")


def run_support(args) -> Outcome:
    _require_format(args, 'json', 'text')
    g, S = _support(args)
    if args.format == 'text':
        return 0, " ".join(f"({i},{j})" for i, j in sorted(S)) + "\n"
    payload = {"family": args.family, "n": g.n, "m": g.m, "pairs": _pairs_json(S)}
    return 0, dump_json(json_envelope("support", payload))


def run_gamma(args, command: str) -> Outcome:
    g, S = _support(args)
    graph = gamma_graph(g.n, S)
    tree = is_tree(graph)
    code = 0 if tree else 1
    if not tree:
        logger.warning(f"gamma(S) of the {args.family} family on {g.describe()} is not a tree")
    if args.format == 'dot':
        return code, gamma_dot(graph, command)
    check = is_rooted_tree(graph)
    if args.format == 'text':
        return code, " ".join(f"{i}->{j}" for i, j in sorted(graph.arcs)) + f"\nroot: {check.root}\n"
    payload = {"family": args.family, **graph.to_json(), "tree": tree, "rooted": check.rooted, "root": check.root}
    return code, dump_json(json_envelope("gamma", payload))


def run_biggraph(args, command: str) -> Outcome:
    g, S = _support(args)
    fg = build_form_graph(g, S)
    d = principal_candidate(g.n, S)
    index = form_index(fg)
    code = 0 if index == 0 else 1
    if args.format == 'dot':
        return code, form_graph_dot(fg, d, command)
    summary = component_summary(fg, d)
    if args.format == 'text':
        lines = [f"{g.describe()}: {fg.graph.number_of_nodes()} vertices, {fg.graph.number_of_edges()} arcs, index {index}"]
        for row in summary:
            lines.append(
                f"  component {row['component']}: {len(row['vertices'])} vertices, root {row['root']}, "
                f"eigenpair ({row['eigenpair'][0]}, {row['eigenpair'][1]})"
            )
        return code, "\n".join(lines) + "\n"
    payload = {
        "family": args.family,
        "algebra": g.to_json(),
        "support": _pairs_json(S),
        "vertices": fg.graph.number_of_nodes(),
        "arcs": fg.graph.number_of_edges(),
        "index": index,
        "rooted": rooted_components_check(fg),
        "components": summary,
    }
    return code, dump_json(json_envelope("biggraph", payload))


def run_principal(args) -> Outcome:
    _require_format(args, 'json', 'text')
    g, S = _support(args)
    d = principal_candidate(g.n, S)
    verified = check_principal(g, S, d)
    if not verified:
        logger.warning(f"D_S fails [D, x] = x on the dual basis for {g.describe()}")
    code = 0 if verified else 1
    if args.format == 'text':
        return code, d.format_text() + "\n"
    payload = {"family": args.family, "m": g.m, "support": _pairs_json(S), **d.to_json(), "verified": verified}
    return code, dump_json(json_envelope("principal", payload))


def run_check_frobenius(args) -> Outcome:
    _require_format(args, 'json', 'text')
    n, m = _require_nm(args)
    g = parabolic_support(n, m)
    S = family_support(args.family, n, m) if args.family != 'random' else frozenset()
    f = _functional(args, g, S)
    certificate = is_frobenius(g, f)
    code = 0 if certificate.frobenius else 1
    if certificate.frobenius:
        logger.info(f"{args.family} functional is Frobenius on {g.describe()}")
    else:
        logger.warning(f"{args.family} functional on {g.describe()} has kernel dimension {certificate.kernel_dimension}")
    if args.format == 'text':
        verdict = "Frobenius" if certificate.frobenius else f"not Frobenius (kernel {certificate.kernel_dimension})"
        return code, f"{g.describe()}: {verdict}\n"
    payload = {"family": args.family, "algebra": g.to_json(), "functional": f.to_json(), **certificate.to_json()}
    return code, dump_json(json_envelope("frobenius", payload))


def run_rmatrix(args) -> Outcome:
    _require_format(args, 'json', 'text')
    g, S = _support(args)
    f = Functional.from_support(S)
    km = kirillov_matrix(g, f)
    peeled_text = None
    try:
        if args.method == 'invert':
            r = r_matrix_for(S, g)
        elif args.method == 'lagrangian':
            r = r_from_lagrangian(lagrangian_split(g, principal_candidate(g.n, S), f))
        else:
            peeled = peel_form_graph(build_form_graph(g, S))
            r, peeled_text = peeled.r, peeled.format()
    except SingularMatrixError as e:
        logger.warning(f"No r-matrix for the {args.family} functional on {g.describe()}: {str(e)}")
        return 1, ""

    defining = defining_property_holds(r, km)
    cybe = None
    if args.verify_cybe:
        cybe = cybe_check(r, g).is_zero()
        logger.info(f"CYBE {'holds' if cybe else 'fails'} for r on {g.describe()}")
    code = 0 if defining and cybe is not False else 1
    text = format_wedge(r)
    if args.format == 'text':
        return code, (peeled_text or text) + "\n"
    payload = {
        "family": args.family,
        "method": args.method,
        "algebra": g.to_json(),
        "functional": f.to_json(),
        "r": r.to_json(),
        "text": text,
        "defining_property": defining,
        "cybe": cybe,
    }
    if peeled_text is not None:
        payload["peeled"] = peeled_text
    return code, dump_json(json_envelope("rmatrix", payload))


def run_meander(args) -> Outcome:
    _require_format(args, 'json', 'text')
    if args.parabolic:
        g = parabolic_support(*args.parabolic)
    elif args.top and args.bottom:
        g = seaweed_support(args.top, args.bottom)
    elif args.n is not None and args.m is not None:
        g = parabolic_support(args.n, args.m)
    else:
        raise ValueError("'meander' needs --parabolic n,m or --top and --bottom")
    census = meander_census(g)
    code = 0 if census.index == 0 else 1
    if args.format == 'text':
        return code, f"{g.describe()}: index {census.index}\n"
    payload = {
        "algebra": g.to_json(),
        "loops": census.loops,
        "chains": census.chains,
        "isolated": census.isolated,
        "index": census.index,
    }
    return code, dump_json(json_envelope("meander", payload))


def run_mcybe(args) -> Outcome:
    _require_format(args, 'json', 'text')
    n, m = _require_nm(args)
    try:
        progression = root_progression(n, m)
        if args.action == 'progression':
            descents = progression.descents
            if args.format == 'text':
                marks = ", ".join(f"{i}->{j}" for i, j in descents) or "none"
                return 0, f"{progression.format_text()}\ndescents: {marks}\n"
            payload = {**progression.to_json(), "descents": [list(p) for p in descents]}
            return 0, dump_json(json_envelope("progression", payload))

        if args.action == 'degenerate':
            h = args.h if args.h is not None else principal_candidate(n, family_support('cyclic', n, m))
            result = degeneration_limit(progression, h)
            if args.format == 'text':
                kept = ", ".join(f"{i}->{j}" for i, j in result.kept) or "none"
                removed = ", ".join(f"{i}->{j}" for i, j in result.removed) or "none"
                return 0, f"{progression.format_text()}\nkept: {kept}\nremoved: {removed}\n"
            return 0, dump_json(json_envelope("degeneration", result.to_json()))

        h = find_separating_h(progression, args.keep)
    except DegenerationError as e:
        logger.warning(f"Degeneration for ({n}, {m}) failed: {str(e)}")
        return 1, ""
    if args.format == 'text':
        return 0, "h = (" + ",".join(str(v) for v in h) + ")\n"
    payload = {"n": n, "m": m, "keep": [list(p) for p in args.keep], "h": list(h)}
    return 0, dump_json(json_envelope("separating_h", payload))


def run_localring(args, command: str) -> Outcome:
    if args.action == 'reduced':
        _require_format(args, 'json', 'text')
        dims = reduced_radical_dims(nx.DiGraph(args.edges))
        if args.format == 'text':
            return 0, "reduced dims: " + ",".join(str(d) for d in dims) + "\n"
        return 0, dump_json(json_envelope("reduced_ring", {"dims": dims, "nilpotence_index": len(dims) + 1}))

    graph = nx.Graph(args.edges)
    p = present(graph)
    if args.action == 'dims':
        _require_format(args, 'json', 'text')
        dims = radical_power_dims(p)
        if args.format == 'text':
            return 0, "dims: " + ",".join(str(d) for d in dims) + f"\nnilpotence index: {nilpotence_index(p)}\n"
        payload = {
            "presentation": p.to_json(),
            "dims": dims,
            "nilpotence_index": nilpotence_index(p),
            "graph_connected": graph_connected(p),
        }
        return 0, dump_json(json_envelope("local_ring", payload))

    rebuilt = reconstruct(p)
    if isinstance(rebuilt, AmbiguousR3):
        logger.warning("The ring is that of both the triangle and the three-pointed star")
        return 1, dump_json(json_envelope("reconstruction", rebuilt.to_json()))
    isomorphic = nx.is_isomorphic(rebuilt, graph)
    code = 0 if isomorphic else 1
    if args.format == 'dot':
        return code, graph_dot(rebuilt, name="reconstructed", command=command)
    edges = sorted(sorted(str(v) for v in edge) for edge in rebuilt.edges())
    if args.format == 'text':
        return code, " ".join(f"{u}-{v}" for u, v in edges) + "\n"
    payload = {"result": "Graph", "edges": edges, "isomorphic": isomorphic}
    return code, dump_json(json_envelope("reconstruction", payload))


def _verify_document(document: dict) -> bool:
    kind = document.get("kind")
    if kind == "support":
        S = family_support(document["family"], int(document["n"]), int(document["m"]))
        return _pairs_json(S) == document["pairs"]
    if kind == "principal":
        n, m = int(document["n"]), int(document["m"])
        S = [tuple(p) for p in document["support"]]
        d = PrincipalElement.from_json(document)
        return d == principal_candidate(n, S) and check_principal(parabolic_support(n, m), S, d)
    if kind == "frobenius":
        g = LieSupport.from_json(document["algebra"])
        certificate = is_frobenius(g, Functional.from_json(document["functional"]))
        return certificate.to_json() == {k: document[k] for k in certificate.to_json()}
    if kind == "rmatrix":
        g = LieSupport.from_json(document["algebra"])
        r = WedgeTwo.from_json(document["r"])
        if not defining_property_holds(r, kirillov_matrix(g, Functional.from_json(document["functional"]))):
            return False
        return document.get("cybe") is not True or cybe_check(r, g).is_zero()
    if kind == "meander":
        census = meander_census(LieSupport.from_json(document["algebra"]))
        return [census.loops, census.chains, census.isolated, census.index] == [
            document["loops"], document["chains"], document["isolated"], document["index"]
        ]
    if kind == "progression":
        progression = root_progression(int(document["n"]), int(document["m"]))
        return progression.to_json() == {k: document[k] for k in progression.to_json()}
    raise ValueError(f"Cannot verify documents of kind {kind!r}")


def run_verify(args) -> Outcome:
    document = load_json_document(args.in_file)
    valid = _verify_document(document)
    if valid:
        logger.info(f"{args.in_file}: {document['kind']} certificate re-validated")
    else:
        logger.warning(f"{args.in_file}: {document['kind']} certificate does not re-validate")
    verdict = "valid" if valid else "invalid"
    if args.format == 'json':
        return (0 if valid else 1), dump_json(json_envelope("verification", {"of": document["kind"], "valid": valid}))
    return (0 if valid else 1), f"{document['kind']}: {verdict}\n"


def run_sweep(args) -> Outcome:
    # Import here so pandas loads only for sweeps
    from frobenius_toolkit.sweeps.sweep_runner import run_sweep as run_named_sweep, save_sweep_report

    _require_format(args, 'json', 'text')
    df = run_named_sweep(args.name, args.n_max)
    path = save_sweep_report(df, args.name, args.report)
    if path is None:
        raise ValueError(f"Could not write the {args.name} report")
    passed = int(df["passed"].sum())
    code = 0 if passed == len(df) else 1
    if args.format == 'text':
        lines = [f"{args.name}: {passed}/{len(df)} cells passed"]
        for row in df[~df["passed"]].itertuples():
            lines.append(f"  ({row.n},{row.m}) expected {row.expected}, observed {row.observed} {row.detail}".rstrip())
        return code, "\n".join(lines) + "\n"
    payload = {
        "name": args.name,
        "n_max": args.n_max,
        "passed": passed,
        "total": len(df),
        "report": path,
        "rows": json.loads(df.to_json(orient="records")),
    }
    return code, dump_json(json_envelope("sweep", payload))


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the application."""
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return 2
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger().setLevel(logging.WARNING)
    command = " ".join(["frobenius-toolkit"] + argv)

    try:
        if args.command == 'support':
            code, text = run_support(args)
        elif args.command == 'gamma':
            code, text = run_gamma(args, command)
        elif args.command == 'biggraph':
            code, text = run_biggraph(args, command)
        elif args.command == 'principal':
            code, text = run_principal(args)
        elif args.command == 'check-frobenius':
            code, text = run_check_frobenius(args)
        elif args.command == 'rmatrix':
            code, text = run_rmatrix(args)
        elif args.command == 'meander':
            code, text = run_meander(args)
        elif args.command == 'mcybe':
            code, text = run_mcybe(args)
        elif args.command == 'localring':
            code, text = run_localring(args, command)
        elif args.command == 'verify':
            code, text = run_verify(args)
        else:
            code, text = run_sweep(args)

        if text and not write_text_output(text, args.out):
            if args.out:
                logger.error(f"Failed to write {args.out}")
                return 2
            sys.stdout.write(text)
    except ValueError as e:
        logger.error(f"Error running {args.command}: {str(e)}")
        return 2
    except OSError as e:
        logger.error(f"Error reading or writing files: {str(e)}")
        return 2
    return code


if __name__ == '__main__':
    sys.exit(main())
