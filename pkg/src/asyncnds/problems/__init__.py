from .dataset import Dataset, DatasetFormatError, load_dataset, save_dataset
from .functions import DTLZ_K, DTLZ_NAMES, PROBLEM_NAMES, ZDT_NAMES, Problem, get_problem
from .synth import INIT_SIZE, INSERTIONS, polynomial_mutation, sbx, synthesize

__all__ = [
    "DTLZ_K", "DTLZ_NAMES", "Dataset", "DatasetFormatError", "INIT_SIZE", "INSERTIONS",
    "PROBLEM_NAMES", "Problem", "ZDT_NAMES", "get_problem", "load_dataset", "polynomial_mutation",
    "sbx", "save_dataset", "synthesize",
]
