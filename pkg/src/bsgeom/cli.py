"""
BSGeom CLI

This module provides the command-line interface: one subcommand per
operation, each printing a JSON document (or CSV, a table, or SVG) that
carries the hash of the configuration it ran under.
"""

import argparse
import csv
import io
import json
import logging
import sys
from typing import Any, Callable, Dict, List, NoReturn, Optional

from tabulate import tabulate

from bsgeom.config import ExperimentConfig, config_hash
from bsgeom.errors import BSGeomError
from bsgeom.tools.boundary import NAdicParams, TreeParams, nadic_info, tree_info
from bsgeom.tools.classification import (
    ClassifyParams,
    CommensurableParams,
    IndexParams,
    TorsionFreeParams,
    classify_case,
    commensurability,
    mapping_torus,
    torsion_free,
)
from bsgeom.tools.conjugacy import ConjugateParams, ProfileParams, conjugate_map, profile_map
from bsgeom.tools.dynamics import (
    CensusParams,
    CocompactParams,
    ContractParams,
    ProbeParams,
    census,
    cocompact,
    contract,
    probe,
)
from bsgeom.tools.geometry import BarycenterParams, DistParams, PointSpec, barycenter_info, dist_info
from bsgeom.tools.group import (
    GrowthParams,
    WitnessParams,
    WordParams,
    discontinuity_info,
    growth_info,
    word_info,
)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

EXIT_USAGE = 2
SVG_COMMANDS = ("tree", "barycenter")

Handler = Callable[[argparse.Namespace, ExperimentConfig], Dict[str, Any]]


class CommandError(Exception):
    """A command-line usage error reported as a JSON error document."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise CommandError(message)


def _read_json(path: str) -> Dict[str, Any]:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _point(text: str) -> PointSpec:
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise ValueError(f"a point is written x,y or x,y,zeta; got {text!r}")
    return PointSpec(x=parts[0], y=parts[1], zeta=parts[2] if len(parts) == 3 else "0")


# handlers


def _nadic(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    return nadic_info(NAdicParams(n=config.n, x=args.x, y=args.y, k=args.k, k_other=args.k_other))


def _tree(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    fmt = "svg" if config.output_format == "svg" else ("dot" if args.dot else "json")
    params = TreeParams(
        n=config.n, root=args.root, depth=args.depth, up=args.up,
        ends=args.ends or [], highlight=args.highlight, format=fmt,
    )
    return tree_info(params)


def _word(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    return word_info(WordParams(n=config.n, word=args.word))


def _growth(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    return growth_info(GrowthParams(n=config.n, radius=args.radius, control_radius=args.control), config)


def _witnesses(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    return discontinuity_info(WitnessParams(n=config.n, count=args.count))


def _dist(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    return dist_info(DistParams(n=config.n, p=_point(args.pt1), q=_point(args.pt2)), config)


def _barycenter(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    fmt = "svg" if config.output_format == "svg" else "json"
    params = BarycenterParams(n=config.n, x=args.x, y=args.y, zeta=args.zeta, eta=args.eta, format=fmt)
    return barycenter_info(params)


def _conjugate(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    params = ConjugateParams(map=_read_json(args.input), mode=args.mode, x0=args.x0, radius=args.radius)
    return conjugate_map(params, config)


def _profile(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    return profile_map(ProfileParams(map=_read_json(args.input), radius=args.radius), config)


def _census(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    return census(CensusParams(n=config.n, block=args.block, radius=args.radius), config)


def _contract(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    return contract(ContractParams(n=config.n, source=args.source, target=args.target))


def _cocompact(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    return cocompact(CocompactParams(n=config.n, x=args.x, y=args.y, zeta=args.zeta), config)


def _probe(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    params = ProbeParams(n=config.n, word=args.word, steps=args.steps, interval=args.interval, clone=args.clone)
    return probe(params)


def _classify(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    return classify_case(ClassifyParams(case=args.case, m=args.m, k=args.k, reflections=args.reflections))


def _commensurable(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    return commensurability(CommensurableParams(m=args.m, n=args.other))


def _torsionfree(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    return torsion_free(TorsionFreeParams(k=args.k))


def _index(args: argparse.Namespace, config: ExperimentConfig) -> Dict[str, Any]:
    return mapping_torus(IndexParams(matrix=args.matrix, index=args.valence))


HANDLERS: Dict[str, Handler] = {
    "nadic": _nadic,
    "tree": _tree,
    "word": _word,
    "growth": _growth,
    "witnesses": _witnesses,
    "dist": _dist,
    "barycenter": _barycenter,
    "conjugate": _conjugate,
    "profile": _profile,
    "census": _census,
    "contract": _contract,
    "cocompact": _cocompact,
    "probe": _probe,
    "classify": _classify,
    "commensurable": _commensurable,
    "torsionfree": _torsionfree,
    "index": _index,
}


def _add_common(parser: argparse.ArgumentParser, default: Any) -> None:
    """Switches shared by the top level and every subcommand."""
    parser.add_argument(
        "--log-level",
        type=str,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default="WARNING" if default is None else default,
        help="Logging level (default: WARNING)",
    )
    parser.add_argument(
        "--format",
        choices=["json", "csv", "svg", "table"],
        default=default,
        help="Output format (default: json, or BSGEOM_OUTPUT_FORMAT)",
    )
    parser.add_argument("--n", type=int, default=default, help="Base n (default: 2, or BSGEOM_N)")
    parser.add_argument("--seed", type=int, default=default, help="Random seed")
    parser.add_argument("--ball-budget", type=int, default=default, help="Maximum enumerated group elements")
    parser.add_argument("--breakpoint-cap", type=int, default=default, help="Maximum PL breakpoints")


def parse_args(args: Optional[List[str]] = None) -> argparse.Namespace:
    """
    Parse command-line arguments.

    Args:
        args: Command-line arguments (defaults to sys.argv[1:])

    Returns:
        Parsed arguments
    """
    parser = _Parser(prog="bsgeom", description="Geometry and rigidity experiments for BS(1,n)")
    _add_common(parser, None)
    # the same switches are accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=text, parents=[common])

    p = add("nadic", "Arithmetic, distance and clones in Q_n")
    p.add_argument("--x", required=True, help="Rational or literal n:low:pre|per")
    p.add_argument("--y", default=None, help="Second element")
    p.add_argument("--k", type=int, default=None, help="Clone height for x")
    p.add_argument("--k-other", type=int, default=None, help="Clone height for y")

    p = add("tree", "Truncation of T_n as JSON, DOT or SVG")
    p.add_argument("--root", default="Z", help='Root clone, "Z" or k:low:digits')
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--up", type=int, default=0)
    p.add_argument("--ends", nargs=2, default=None, help="Two ends whose lines are compared")
    p.add_argument("--highlight", default=None, help="End whose line is highlighted in SVG")
    p.add_argument("--dot", action="store_true", help="Emit DOT text instead of node-link JSON")

    p = add("word", "Normal form of a word in a, b")
    p.add_argument("--word", required=True, help='Word such as "bAbaa"')

    p = add("growth", "Ball sizes of BS(1,n)")
    p.add_argument("--radius", type=int, default=8)
    p.add_argument("--control", type=int, default=None, help="Radius of the Z^2 control fit")

    p = add("witnesses", "Proper-discontinuity witnesses g_k = x + k/n^k")
    p.add_argument("--count", type=int, default=8)

    p = add("dist", "Distance bounds in X_n")
    p.add_argument("--pt1", required=True, help="First point x,y[,zeta]")
    p.add_argument("--pt2", required=True, help="Second point x,y[,zeta]")

    p = add("barycenter", "Barycenter pi and tree median kappa")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--zeta", default="0")
    p.add_argument("--eta", default=None)

    p = add("conjugate", "Conjugate a PL homeomorphism to an affine model")
    p.add_argument("--input", required=True, help="plhomeo.v1 JSON file, - for stdin")
    p.add_argument("--mode", choices=["auto", "translation", "dilation"], default="auto")
    p.add_argument("--x0", default="0")
    p.add_argument("--radius", type=int, default=32)

    p = add("profile", "Classification and power stretch profile")
    p.add_argument("--input", required=True, help="plhomeo.v1 JSON file, - for stdin")
    p.add_argument("--radius", type=int, default=16)

    p = add("census", "Proper-discontinuity census of a compact block")
    p.add_argument("--block", default="standard", help='"standard", "control" or e.g. "[0,1]x[2,3]xZ"')
    p.add_argument("--radius", type=int, default=6)

    p = add("contract", "Element taking clone K into clone U")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)

    p = add("cocompact", "Element moving (x, y, zeta) into the fundamental block")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--zeta", default="0")

    p = add("probe", "Source-sink probe along the powers of an element")
    p.add_argument("--word", default="b")
    p.add_argument("--steps", type=int, default=12)
    p.add_argument("--interval", default="[0,1]")
    p.add_argument("--clone", default="Z")

    p = add("classify", "Presentation of Gamma in one case")
    p.add_argument("--case", required=True, choices=["1", "2", "3i", "3ii"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--reflections", type=int, default=5)

    p = add("commensurable", "Commensurability of BS(1,m) and BS(1,n)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--other", type=int, required=True, help="The second parameter")

    p = add("torsionfree", "Torsion-free classification of BS(1,k)")
    p.add_argument("--k", type=int, required=True)

    p = add("index", "Index and vcd of an ascending HNN extension of Z^r")
    p.add_argument("--matrix", required=True, help='e.g. "[[2,1],[0,3]]"')
    p.add_argument("--valence", type=int, default=None)

    p = add("serve", "Start the MCP tool server")
    p.add_argument("--transport", choices=["stdio", "sse"], default="stdio")

    return parser.parse_args(args)


# rendering


def _rows(result: Dict[str, Any]) -> List[Dict[str, Any]]:
    rows = result.get("rows")
    if rows:
        return rows
    return [{"key": k, "value": v} for k, v in result.items() if not isinstance(v, (dict, list))]


def render(command: str, result: Dict[str, Any], config: ExperimentConfig) -> str:
    """Serialise a command result in the configured format, tagged with the config hash."""
    digest = config_hash(config)
    fmt = config.output_format
    if fmt == "svg":
        if "svg" not in result:
            raise ValueError(f"svg output is available for {', '.join(SVG_COMMANDS)} only")
        header, _, body = result["svg"].partition("\n")
        return f"{header}\n<!-- bsgeom {command} configHash={digest} -->\n{body}"
    if fmt == "csv":
        rows = _rows(result)
        buffer = io.StringIO()
        buffer.write(f"# bsgeom {command} configHash={digest}\n")
        writer = csv.DictWriter(buffer, fieldnames=list(rows[0]) if rows else ["key", "value"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buffer.getvalue()
    if fmt == "table":
        table = tabulate(_rows(result), headers="keys", tablefmt="github")
        return f"bsgeom {command}  configHash={digest}\n{table}\n"
    document = {"command": command, "configHash": digest, "config": config.model_dump(), "result": result}
    return json.dumps(document, indent=2, sort_keys=True, default=str) + "\n"


def _error_document(kind: str, message: str, digest: Optional[str]) -> str:
    document = {"error": kind, "message": message, "configHash": digest}
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def run(parsed_args: argparse.Namespace) -> int:
    """
    Run one subcommand and print its artefact.

    Args:
        parsed_args: Parsed command-line arguments

    Returns:
        Exit status: 0 on success, 2 on invalid input
    """
    digest: Optional[str] = None
    try:
        config = ExperimentConfig.from_env(
            n=parsed_args.n,
            seed=parsed_args.seed,
            ball_budget=parsed_args.ball_budget,
            breakpoint_cap=parsed_args.breakpoint_cap,
            output_format=parsed_args.format,
        )
        digest = config_hash(config)
        result = HANDLERS[parsed_args.command](parsed_args, config)
        sys.stdout.write(render(parsed_args.command, result, config))
        return 0
    except (BSGeomError, ValueError, OSError) as e:
        logger.error(f"Error running {parsed_args.command}: {str(e)}")
        sys.stdout.write(_error_document(type(e).__name__, str(e), digest))
        return EXIT_USAGE


def main(args: Optional[List[str]] = None) -> int:
    """
    Main entry point for the BSGeom CLI.

    Args:
        args: Command-line arguments (defaults to sys.argv[1:])

    Returns:
        Exit status
    """
    try:
        parsed_args = parse_args(args)
    except CommandError as e:
        sys.stdout.write(_error_document("UsageError", str(e), None))
        return EXIT_USAGE

    # Set log level
    logging.getLogger().setLevel(getattr(logging, parsed_args.log_level))

    if parsed_args.command == "serve":
        from bsgeom.server import create_bsgeom_mcp

        try:
            mcp_server = create_bsgeom_mcp()
            logger.info("Starting BSGeom MCP server")
            mcp_server.start(transport=parsed_args.transport)
        except KeyboardInterrupt:
            logger.info("Server stopped by user")
        except Exception as e:
            logger.error(f"Error starting server: {str(e)}")
            return 1
        return 0

    return run(parsed_args)


if __name__ == "__main__":
    sys.exit(main())
