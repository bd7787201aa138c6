"""Canadian traveller simulations on outerplanar graphs with exact arithmetic."""

from .engine import (SURRENDER, IllegalMove, KnowledgeState, NotCompleted, Outcome, SimulationResult,
                     Status, Strategy, StrategyFault, competitive_ratio, init_state, simulate, step)
from .graph import (ChordClass, GraphError, NotASeparator, NotBiconnected, OuterEmbedding, RoadMap,
                    UnknownEdge, WeightedGraph, biconnected_decomposition, classify_chord, ekey, sides,
                    target_component, validate)
from .instance import Instance, fixture, load_instance, dump_instance
from .oracle import InfeasibleRoadMap, is_feasible, opt_cost, shortest_distance, stretch
from .strategies import (BudgetSequence, DecomposeWrapper, ExpBalancing, Reposition, check_levels,
                         decompose_wrapper, exp_balancing, exp_balancing_any,
                         reposition)

__version__ = "0.1.0"
