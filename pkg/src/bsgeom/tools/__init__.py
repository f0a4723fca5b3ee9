"""
BSGeom Tools

This package contains the JSON-facing operations shared by the CLI and the
MCP tool server. Each module pairs pydantic parameter models with functions
that return JSON-ready dicts.
"""
