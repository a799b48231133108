# tests/test_schema_safety.py
"""Keeps the MCP tool schemas inside the flat subset that Cursor and similar hosts accept."""

import pytest
from mcp.server.fastmcp import FastMCP

DISALLOWED_CONSTRUCTS = {"anyOf", "oneOf", "allOf", "$ref", "discriminator"}
SIMPLE_TYPES = {"string", "integer", "boolean", "number"}
TOOL_NAMES = ["rmse_table", "curve", "qfunc", "verify"]


def get_tool_schema(server: FastMCP, tool_name: str) -> dict:
    for tool in server._tool_manager._tools.values():
        if tool.name == tool_name:
            return tool.parameters
    raise ValueError(f"Tool '{tool_name}' not found")


def find_unsafe_constructs(obj, path: str = "") -> list:
    """Every union, reference or nested object found anywhere in a schema."""
    issues = []
    if isinstance(obj, dict):
        for construct in DISALLOWED_CONSTRUCTS:
            if construct in obj:
                issues.append(f"{path or '<root>'}: uses '{construct}'")
        if path and obj.get("type") == "object":
            issues.append(f"{path}: nested object")
        if "additionalProperties" in obj and path:
            issues.append(f"{path}: dict-like additionalProperties")
        for key, value in obj.items():
            issues.extend(find_unsafe_constructs(value, f"{path}.{key}" if path else key))
    elif isinstance(obj, list):
        for i, item in enumerate(obj):
            issues.extend(find_unsafe_constructs(item, f"{path}[{i}]"))
    return issues


@pytest.fixture(scope="module")
def server() -> FastMCP:
    from inphase.server import server
    return server


@pytest.mark.parametrize("tool_name", TOOL_NAMES)
def test_schema_is_flat(server, tool_name):
    issues = find_unsafe_constructs(get_tool_schema(server, tool_name))
    if issues:
        pytest.fail(f"Schema safety violations in {tool_name}:\n" + "\n".join(f"  - {issue}" for issue in issues))


@pytest.mark.parametrize("tool_name", TOOL_NAMES)
def test_array_params_hold_simple_items(server, tool_name):
    for prop_name, prop_schema in get_tool_schema(server, tool_name).get("properties", {}).items():
        if prop_schema.get("type") == "array":
            assert prop_schema.get("items", {}).get("type") in SIMPLE_TYPES, (
                f"'{prop_name}' of {tool_name} should be an array of strings"
            )


@pytest.mark.parametrize("tool_name, required", [
    ("rmse_table", {"which"}),
    ("curve", {"kind"}),
    ("qfunc", {"state", "grid"}),
    ("verify", set()),
    ("usage", set()),
])
def test_required_params(server, tool_name, required):
    schema = get_tool_schema(server, tool_name)
    assert set(schema.get("required", [])) == required


def test_list_params_are_arrays_of_strings(server):
    assert get_tool_schema(server, "curve")["properties"]["methods"]["type"] == "array"
    assert get_tool_schema(server, "verify")["properties"]["checks"]["items"]["type"] == "string"


def test_coerce_to_list_accepts_stringified_lists():
    from inphase.server import _coerce_to_list
    assert _coerce_to_list('["exact/*", "!exact/propagator_*"]', "checks") == ["exact/*", "!exact/propagator_*"]
    assert _coerce_to_list("inphase, wkb", "methods") == ["inphase", "wkb"]
    assert _coerce_to_list(None, "methods") == []
    assert _coerce_to_list(["tricomi"], "methods") == ["tricomi"]
    assert _coerce_to_list(3, "methods") == []
