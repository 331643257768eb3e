"""Offline handwritten capital recognition with attributed line/curve graphs,
a greedy deviation score, and path-splicing crossover."""
from .deviation import edge_deviation, graph_deviation
from .errors import (
    BothNull,
    DegenerateTriangle,
    EmptyImage,
    EmptyTemplates,
    EmptyTrainingSet,
    GlyphError,
    IllegalMultiEdge,
    IllegalState,
    MalformedImage,
    MalformedStore,
    OperationBroken,
)
from .extract import extract_graph
from .genetic import (
    AdjacencyMatrix,
    MatchAssignment,
    crossover,
    evolve_pool,
    find_paths,
    generate_adjacency,
    make_graph,
    match_points,
    reconstruct_path,
)
from .geometry import CURVE, LINE, Edge, EdgeKind, Glyph, Params, Point, angle_at, squared_distance
from .raster import BinaryRaster, load_raster, normalize_raster, thin
from .recognizer import (
    EvalReport,
    RecognitionResult,
    TemplateSet,
    evaluate,
    glyph_from_raster,
    load_templates,
    recognize,
    recognize_glyph,
    save_templates,
    train,
)

__version__ = "0.1.0"
