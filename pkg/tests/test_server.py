"""Tests for MCP server module."""

import asyncio
import json

import pytest

from bsgeom.server import create_bsgeom_mcp


@pytest.fixture
def bsgeom_mcp():
    """Create a BSGeom MCP server instance for testing."""
    return create_bsgeom_mcp()


def test_init(bsgeom_mcp):
    """Test server initialization."""
    assert bsgeom_mcp.name == "BSGeom"
    assert bsgeom_mcp.config.n == 2


def test_tools_registered(bsgeom_mcp):
    """Test that every operation is exposed as a tool."""
    tools = asyncio.run(bsgeom_mcp.mcp_server.list_tools())
    names = {tool.name for tool in tools}
    assert {"nadic", "tree", "word", "growth", "conjugate", "census", "classify", "index"} <= names


def test_word_tool(bsgeom_mcp):
    """Test a tool call returns the JSON document with the config hash."""
    content = asyncio.run(bsgeom_mcp.mcp_server.call_tool("word", {"params": {"word": "bAbaa"}}))
    document = json.loads(content[0].text)
    assert len(document["configHash"]) == 64
    assert document["result"]["map"] == "x -> 2^2 x + 6"
