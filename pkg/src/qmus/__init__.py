"""qmus: a quantum score engine.

Parse a small textual DSL for quantum scores, compute exact Born-rule
listening distributions, sample reproducible classical performances, and
render the results to MIDI, CSV, or a gray-level text sketch.
"""
from .models import (GRAY_LADDER, GrayLevel, NoteLabel, OccupancyState,
                     OctaveModelConfig, angle_state, complementary_sequence,
                     gray_level, mean_occupancy, midi_pitch,
                     note_basis_state, occupancy_state, occupancy_vector)
from .perform import (EventDistribution, MelodyDistribution,
                      PerformanceSample, event_distribution,
                      melody_distribution, render_csv, render_midi,
                      render_text, sample_performance, score_distribution)
from .qcore import (BellKind, Distribution, Projector, SeededRng, StateVector,
                    UnitaryMatrix, apply_unitary, basis_change, bell_state,
                    born_distribution, gate, inner_product, is_complementary,
                    is_entangled, is_unitary, normalize, projector_of,
                    sample_outcome, states_equal_up_to_phase, tensor)
from .score import (Amp, BarEvent, BellEvent, GateEvent, OccEvent, ParseError,
                    PureEvent, ScoreAST, ScoreModel, SupEvent, Voice, parse,
                    pretty_print, validate)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
