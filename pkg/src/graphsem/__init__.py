"""Finite-model workbench for graph-based semantics of non-distributive modal logic."""
from .correspondence import AxiomId, check_correspondence, condition_of, random_frame, random_frames
from .fca import Concept, ConceptLattice, FormalContext, enumerate_concepts
from .frames import ComplexAlgebra, FrameError, GraphFrame, check_e_compat, complex_algebra
from .logic import Sequent, parse_formula, parse_sequent, print_formula
from .relcore import Rel, StateSet, Universe, comp_bullet, comp_circ
from .semantics import Model, evaluate, forces, frame_valid, refutes, sequent_true

__all__ = [
    "AxiomId",
    "ComplexAlgebra",
    "Concept",
    "ConceptLattice",
    "FormalContext",
    "FrameError",
    "GraphFrame",
    "Model",
    "Rel",
    "Sequent",
    "StateSet",
    "Universe",
    "check_correspondence",
    "check_e_compat",
    "comp_bullet",
    "comp_circ",
    "complex_algebra",
    "condition_of",
    "enumerate_concepts",
    "evaluate",
    "forces",
    "frame_valid",
    "parse_formula",
    "parse_sequent",
    "print_formula",
    "random_frame",
    "random_frames",
    "refutes",
    "sequent_true",
]
