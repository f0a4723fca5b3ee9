"""
BSGeom MCP Server

This module exposes the bsgeom operations as Model Context Protocol tools.
"""

import os
import json
import logging

from dotenv import load_dotenv
from mcp.server.fastmcp import FastMCP

from bsgeom.config import ExperimentConfig, config_hash
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
    census as census_tool,
    cocompact as cocompact_tool,
    contract as contract_tool,
    probe as probe_tool,
)
from bsgeom.tools.geometry import BarycenterParams, DistParams, barycenter_info, dist_info
from bsgeom.tools.group import GrowthParams, WordParams, growth_info, word_info

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()


class BSGeomMCP:
    """
    BSGeom MCP Server implementation.

    This class provides a Model Context Protocol (MCP) server that lets
    clients evaluate words, build conjugacies, run censuses and enumerate
    presentations without a local Python session.
    """

    def __init__(self):
        """Initialize the BSGeom MCP server."""
        try:
            self.config = ExperimentConfig.from_env()

            self.mcp_server = FastMCP("BSGeom")
            # Add name attribute for MCP CLI
            self.name = "BSGeom"

            self._register_resources()
            self._register_tools()
        except Exception as e:
            logger.error(f"Error initializing BSGeom MCP server: {str(e)}")
            raise

    def _dump(self, result: dict) -> str:
        return json.dumps({"configHash": config_hash(self.config), "result": result}, default=str)

    def _register_resources(self):
        """Register the configuration resource."""

        @self.mcp_server.resource("config://current")
        async def current_config() -> str:
            """The experiment configuration and its hash"""
            return json.dumps({"configHash": config_hash(self.config), "config": self.config.model_dump()})

    def _register_tools(self):
        """Register all BSGeom tools with the MCP server."""

        # Boundary tools
        @self.mcp_server.tool()
        async def nadic(params: NAdicParams) -> str:
            """
            Arithmetic, distance and clones for elements of Q_n.

            Args:
                params: Parameters naming the elements and clone heights

            Returns:
                JSON string with the sum, product, distance and clones
            """
            try:
                return self._dump(nadic_info(params))
            except Exception as e:
                logger.error(f"Error in nadic tool: {str(e)}")
                raise

        @self.mcp_server.tool()
        async def tree(params: TreeParams) -> str:
            """
            A finite truncation of the clone tree T_n.

            Args:
                params: Parameters naming the root clone, depth and rendering

            Returns:
                JSON string with node-link data, DOT text or SVG
            """
            try:
                return self._dump(tree_info(params))
            except Exception as e:
                logger.error(f"Error in tree tool: {str(e)}")
                raise

        # Group tools
        @self.mcp_server.tool()
        async def word(params: WordParams) -> str:
            """
            Evaluate a word in a, b to its affine normal form.

            Args:
                params: Parameters naming the base and the word

            Returns:
                JSON string with the element and its normal-form word
            """
            try:
                return self._dump(word_info(params))
            except Exception as e:
                logger.error(f"Error in word tool: {str(e)}")
                raise

        @self.mcp_server.tool()
        async def growth(params: GrowthParams) -> str:
            """
            Ball sizes of BS(1,n) up to a radius.

            Args:
                params: Parameters naming the base and the radius

            Returns:
                JSON string with the counts and growth rates
            """
            try:
                return self._dump(growth_info(params, self.config))
            except Exception as e:
                logger.error(f"Error in growth tool: {str(e)}")
                raise

        # Geometry tools
        @self.mcp_server.tool()
        async def dist(params: DistParams) -> str:
            """
            Certified distance bounds between two points of X_n.

            Args:
                params: Parameters naming the two points

            Returns:
                JSON string with lo, hi and the certificate
            """
            try:
                return self._dump(dist_info(params, self.config))
            except Exception as e:
                logger.error(f"Error in dist tool: {str(e)}")
                raise

        @self.mcp_server.tool()
        async def barycenter(params: BarycenterParams) -> str:
            """
            The barycenter of (x, y, zeta) and the tree median of (x, eta, zeta).

            Args:
                params: Parameters naming the boundary points

            Returns:
                JSON string with the points of X_n
            """
            try:
                return self._dump(barycenter_info(params))
            except Exception as e:
                logger.error(f"Error in barycenter tool: {str(e)}")
                raise

        # Conjugacy tools
        @self.mcp_server.tool()
        async def conjugate(params: ConjugateParams) -> str:
            """
            Conjugate a PL homeomorphism of R to a translation or a dilation.

            Args:
                params: Parameters holding the plhomeo.v1 document and the mode

            Returns:
                JSON string with the case, s or alpha and the certificates
            """
            try:
                return self._dump(conjugate_map(params, self.config))
            except Exception as e:
                logger.error(f"Error in conjugate tool: {str(e)}")
                raise

        @self.mcp_server.tool()
        async def profile(params: ProfileParams) -> str:
            """
            Classify a PL homeomorphism and extract its stretch.

            Args:
                params: Parameters holding the plhomeo.v1 document

            Returns:
                JSON string with the classification and the stretch estimate
            """
            try:
                return self._dump(profile_map(params, self.config))
            except Exception as e:
                logger.error(f"Error in profile tool: {str(e)}")
                raise

        # Dynamics tools
        @self.mcp_server.tool()
        async def census(params: CensusParams) -> str:
            """
            Proper-discontinuity census of a compact block.

            Args:
                params: Parameters naming the block and the radius

            Returns:
                JSON string with the counts per radius and the elements
            """
            try:
                return self._dump(census_tool(params, self.config))
            except Exception as e:
                logger.error(f"Error in census tool: {str(e)}")
                raise

        @self.mcp_server.tool()
        async def contract(params: ContractParams) -> str:
            """
            An element taking one clone into another.

            Args:
                params: Parameters naming the clones

            Returns:
                JSON string with the element and its exponent
            """
            try:
                return self._dump(contract_tool(params))
            except Exception as e:
                logger.error(f"Error in contract tool: {str(e)}")
                raise

        @self.mcp_server.tool()
        async def cocompact(params: CocompactParams) -> str:
            """
            An element moving a triple into the fundamental block.

            Args:
                params: Parameters naming the triple

            Returns:
                JSON string with the element and the normalised triple
            """
            try:
                return self._dump(cocompact_tool(params, self.config))
            except Exception as e:
                logger.error(f"Error in cocompact tool: {str(e)}")
                raise

        @self.mcp_server.tool()
        async def probe(params: ProbeParams) -> str:
            """
            Source-sink probe along the powers of an element.

            Args:
                params: Parameters naming the element and the compacta

            Returns:
                JSON string with the sink, source and contraction rates
            """
            try:
                return self._dump(probe_tool(params))
            except Exception as e:
                logger.error(f"Error in probe tool: {str(e)}")
                raise

        # Classification tools
        @self.mcp_server.tool()
        async def classify(params: ClassifyParams) -> str:
            """
            The presentation of Gamma in one case of the classification.

            Args:
                params: Parameters naming the case and m

            Returns:
                JSON string with the relations and GAP text
            """
            try:
                return self._dump(classify_case(params))
            except Exception as e:
                logger.error(f"Error in classify tool: {str(e)}")
                raise

        @self.mcp_server.tool()
        async def commensurable(params: CommensurableParams) -> str:
            """
            Whether BS(1,m) and BS(1,n) are commensurable.

            Args:
                params: Parameters naming m and n

            Returns:
                JSON string with the primitive roots and the verdict
            """
            try:
                return self._dump(commensurability(params))
            except Exception as e:
                logger.error(f"Error in commensurable tool: {str(e)}")
                raise

        @self.mcp_server.tool()
        async def torsionfree(params: TorsionFreeParams) -> str:
            """
            The torsion-free group BS(1,k) and its commensurability class.

            Args:
                params: Parameters naming k

            Returns:
                JSON string with the presentation and the class
            """
            try:
                return self._dump(torsion_free(params))
            except Exception as e:
                logger.error(f"Error in torsionfree tool: {str(e)}")
                raise

        @self.mcp_server.tool()
        async def index(params: IndexParams) -> str:
            """
            Index, vcd and cohomology profile of an ascending HNN extension of Z^r.

            Args:
                params: Parameters holding the integer matrix

            Returns:
                JSON string with the index and the degree profile
            """
            try:
                return self._dump(mapping_torus(params))
            except Exception as e:
                logger.error(f"Error in index tool: {str(e)}")
                raise

    def start(self, transport: str = "stdio"):
        """
        Start the MCP server.

        Args:
            transport: Transport mode - "stdio" for local, "sse" for remote HTTP/SSE

        Note:
            For SSE transport, configure host and port via environment variables:
            - FASTMCP_HOST (default: "0.0.0.0")
            - FASTMCP_PORT (default: 8000)
        """
        if transport == "sse":
            host = os.getenv("FASTMCP_HOST", "0.0.0.0")
            port = os.getenv("FASTMCP_PORT", "8000")
            logger.info(f"Starting MCP server in SSE mode on {host}:{port}")
            self.mcp_server.run(transport="sse")
        else:
            logger.info("Starting MCP server in stdio mode")
            self.mcp_server.run()


def create_bsgeom_mcp() -> BSGeomMCP:
    """
    Create and configure a BSGeom MCP server instance.

    Returns:
        Configured BSGeomMCP instance
    """
    return BSGeomMCP()


# Module-level instance for `mcp dev src/bsgeom/server.py`
try:
    server = create_bsgeom_mcp()
except Exception as e:
    logger.error(f"Error creating BSGeom MCP server: {str(e)}")
    server = None


if __name__ == "__main__":
    try:
        mcp_server = create_bsgeom_mcp()
        transport = os.getenv("MCP_TRANSPORT", "stdio")
        mcp_server.start(transport=transport)
    except Exception as e:
        logger.error(f"Error starting BSGeom MCP server: {str(e)}")
        import sys
        sys.exit(1)
