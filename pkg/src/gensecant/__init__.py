"""Generalized secant method for simple complex roots of f(z) = 0."""
from .divdiff import DividedDifferenceTable, build, derivative_at_newest, newton_eval, push_newest
from .expr import Expression, NonFinite, evaluate, parse
from .order import OrderInfo, asymptotic_error_constant, estimate_order, order_of_method, sigma_ratios
from .problems import Problem, builtin_problems, from_expression, lookup
from .report import Flag, IterationRecord, build_report, render, significant_digits
from .solver import SolverConfig, SolverTrace, Status, Z1Policy, bootstrap, generate_z1, iterate, solve

__version__ = "0.1.0"
