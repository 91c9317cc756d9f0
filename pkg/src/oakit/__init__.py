"""oakit: a toolkit for the open annotation data model.

Typed construction and validation of annotations, a Turtle subset codec,
selector resolution against local documents, multiplicity expansion, and
conversion of legacy Annotea graphs.
"""

from .anchoring import (
    AmbiguousMatch,
    AnchorMethod,
    AnchorResult,
    MalformedFragment,
    MediaFragment,
    OutOfRange,
    QuoteNotFound,
    SpatialPercent,
    SpatialPixels,
    TextDocument,
    TimeInterval,
    UnsupportedDimension,
    make_text_position,
    make_text_quote,
    parse_media_fragment,
    resolve_text_position,
    resolve_text_quote,
)
from .annotea import (
    AnnoteaRecord,
    ConversionEntry,
    ConversionReport,
    NoAnnotations,
    convert_annotea,
    extract_annotea_records,
)
from .graph import Graph, isomorphic, skolemize
from .mapping import MalformedStructure, NotAnAnnotation, find_annotations, lift, lower
from .model import (
    Annotation,
    BodyRole,
    ConstructKind,
    CycleDetected,
    EmbeddedCss,
    EmbeddedText,
    ExternalCss,
    ExternalResource,
    Finding,
    FragmentSelector,
    HttpRequestState,
    Motivation,
    MultiplicityConstruct,
    NodeMinter,
    OpaqueSpecifier,
    ResourceRef,
    Selector,
    Severity,
    SpecificResource,
    State,
    StyleRef,
    SvgSelector,
    TextPositionSelector,
    TextQuoteSelector,
    TimeState,
    UnsupportedRole,
    ValidationReport,
    classify_body,
    default_registry,
    load_motivation_registry,
    parse_motivation_registry,
    resolve_motivation,
    validate,
)
from .multiplicity import EmptyConstruct, ExpandMode, Interpretation, expand, flatten_leaves
from .specifiers import (
    CssSyntaxError,
    EmptyFragmentValue,
    NoFragment,
    SourceHasFragment,
    StyleRuleNotFound,
    decompose_fragment_uri,
    default_fragment_spec_table,
    fragment_spec_for,
    load_fragment_spec_table,
    parse_fragment_spec_table,
    reconstruct_fragment_uri,
    select_style_declarations,
    validate_selector,
)
from .terms import BlankNode, Iri, Literal, NodeId, Term, Triple
from .turtle import TurtleSyntaxError, parse_ntriples, parse_turtle, serialize_turtle

__version__ = "0.1.0"
