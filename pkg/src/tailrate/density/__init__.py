"""Weighted homomorphism densities, entropies, sampling and the mean-field bound."""

from .contraction import ContractionPlan, contract, gradient, make_plan, t_density
from .entropy import entropy_Ip, i_p, j_p
from .finner import finner_check, finner_corollary
from .variational import (Planted, clique_cost, hub_cost, nmf_upper_bound, plant_clique,
                          plant_hubs, sweep_planted)
from .weighted import WeightedRGraph, load_weighted, sample_gnp

__all__ = [
    "ContractionPlan", "contract", "gradient", "make_plan", "t_density",
    "entropy_Ip", "i_p", "j_p", "finner_check", "finner_corollary",
    "Planted", "clique_cost", "hub_cost", "nmf_upper_bound", "plant_clique", "plant_hubs",
    "sweep_planted", "WeightedRGraph", "load_weighted", "sample_gnp",
]
