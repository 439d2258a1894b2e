"""sceneforge: prompt-driven procedural scene generation at desk scale.

A three-role agent pipeline (visualizer, planner, manager) drives a
headless DCC-tool simulator over an MCP-style JSON-RPC protocol, steered
by a chatflow state machine, a human-in-the-loop candidate-selection
feedback loop, and parent-child retrieval augmentation.
"""

__version__ = "0.1.0"
