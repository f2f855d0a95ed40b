"""coordcycle: coupled dynamics of behavior and preferences in two-strategy
coordination games with negative payoff feedback.

The population share x of one strategy evolves under a revision protocol
(best response, logit, or replicator) while the payoffs -- summarized by the
indifference state y -- slowly adjust against whichever strategy is more
popular.  This package integrates the joint dynamics with exact
diagonal-crossing localization, classifies steady-state stability, detects
limit orbits on the diagonal section, and reproduces the reference phase
portraits.
"""

from .analysis import (CLASS_CENTER_THRESHOLD, CLASS_REPELLING, CLASS_SINK,
                       InsufficientCrossingsError, LyapunovEvaluation,
                       OrbitReport, StabilityReport, UnsupportedDynamicError,
                       classify_stability, detect_orbit, eta_star,
                       jacobian_at_steady_state, lyapunov, lyapunov_along,
                       steady_state)
from .fields import (BRGeometry, DynamicKind, Interval, br_geometry, br_xdot,
                     logistic, logit_choice_probability, logit_xdot,
                     replicator_xdot, sliding_feasible, xdot)
from .game import (DomainError, GamePayoffMatrix, JointState, ModelParams,
                   ZeroAlignmentError, payoff_adjustment, payoff_difference,
                   y_dot)
from .portraits import PortraitStyle, render_phase_portrait, write_phase_portrait
from .reference import reference_states
from .scenarios import (GOLDEN_SCENARIOS, Config, RunResult, Scenario,
                        SweepSpec, load_config, run_golden, run_scenario,
                        run_sweep)
from .solver import (BracketError, ConfigError, CrossingDirection,
                     CrossingEvent, IntegrationError, IntegratorConfig,
                     TERM_DIVERGENCE, TERM_MAX_CROSSINGS, TERM_MAX_TIME,
                     Trajectory, br_crossing_coefficients, br_crossing_time,
                     br_integrate_analytic, integrate, integrate_full_matrix,
                     locate_event)

__version__ = "0.1.0"
