//! Symbolic calculus for abstract Lefschetz fibrations over plumbing fibers.

pub mod arc;
pub mod catalog;
pub mod certificate;
pub mod decomposition;
pub mod document;
pub mod fibration;
pub mod lattice;
pub mod search;

pub use arc::{
    apply_braid_word, arc_equal, half_twist, sphere_intersection, standard_arc, Arc, ArcCode,
    ArcError, BraidLetter, MarkedDisk, Side,
};
pub use catalog::{
    build_a_milnor, build_p_tmj, build_q, build_x, build_y, build_z, end_connect_sum_fibration,
    CatalogError, TreeSpec,
};
pub use certificate::{
    builtin_certificate, builtin_certificates, BuiltinParams, BUILTIN_NAMES, milnor_fiber_families, p_tree_first_reduction, p_tree_shift, verify,
    weinstein_reduction, x_to_a_milnor, x_to_y_smooth, z_family_chain, z_family_member, z_split,
    Certificate, CertificateError, FamilyMember, PlumbingFamily, RejectReason, Verdict,
};
pub use decomposition::{
    component_count, detect_blocks, index_gaps, invariant_report, sum_invariants, thimble_graph,
    BlockDecomposition, BlockFailure, ComponentCount, DecompositionError, Exactness,
    IndexGapReport, InvariantReport, SH_NOT_IMPLEMENTED,
};
pub use fibration::{
    elementary_related, parse_word, smooth_step, AbelianGroup, AbstractLF, CanonicalKey, Cycle,
    CycleCode, Direction, FibrationError, IllegalReason, Mode, Move, WordState,
};
pub use lattice::{
    apply_twist_word, free_reduce, intersection_form, inverse_word, picard_lefschetz,
    smith_normal_form, twist_power, HomClass, IntersectionForm, PlumbingTree, SmithForm,
    TreeError, TwistLetter,
};
pub use search::{search, search_until, SearchBudget, SearchError, SearchOutcome, NOT_FOUND};
pub use document::{
    certificate_from_json, certificate_to_json, document_kind, fibration_from_json,
    fibration_to_json, report_from_json, report_to_json, DocumentError, FORMAT_VERSION,
};
