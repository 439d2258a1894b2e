"""Walkthrough: the simulator console and the expression-bound scene graph.

Run with: python3 demos/console_tour.py
"""

from sceneforge.dccsim import CommandDiagnostic, Scene, SceneError, run_console_line, snapshot_text


def run(scene, line):
    scene, output = run_console_line(scene, line)
    print(f"  $ {line}")
    for row in output.splitlines():
        print(f"    {row}")
    return scene


scene = Scene()

print("Build a two-object rig where the roof rides on the wall:")
scene = run(scene, "add cube wall height=2.5 sx=4 color=#8a7f6d")
scene = run(scene, "add cube roof base_z=0 sx=4.2")
scene = run(scene, "link roof.base_z = wall.height")

print("\nChanging the wall now moves the roof (fixed-point re-evaluation):")
scene = run(scene, "set wall.height 3")
scene = run(scene, "query roof")

print("\nCycles are rejected before any mutation happens:")
before = snapshot_text(scene)
try:
    run(scene, "link wall.height = roof.base_z + 1")
except SceneError as e:
    print(f"  rejected: {e}")
assert snapshot_text(scene) == before, "failed link must not touch the scene"

print("\nParse diagnostics point at the offending column (1-based):")
try:
    run(scene, "set wall 3")
except CommandDiagnostic as e:
    print(f"  rejected: {e}")

print("\nSemantic checks fire after parsing, still without mutating:")
try:
    run(scene, "add cube bad sx=-1")
except SceneError as e:
    print(f"  rejected: {e}")

print("\nCanonical snapshot (sorted, whitespace-free, byte-stable):")
print(f"  {snapshot_text(scene)}")
