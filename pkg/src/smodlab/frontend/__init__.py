"""Formula/morphism parsing, workspace loading, interpretation, and the CLI."""

from .formulas import (Atom, Bang, Dual, Lolli, One, ParseError, Plus, Tensor,
                       Top, With, Zero, parse_formula, print_formula)
from .workspace import Workspace, WorkspaceError, load_workspace, loads_workspace
from .interpreter import InterpretError, interpret_formula, interpret_morphism
