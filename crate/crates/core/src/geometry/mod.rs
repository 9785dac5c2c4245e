//! Oriented negative planes, the surface `S` and the forms integrated over it.

pub mod chart;
pub mod forms;
pub mod frame;
pub mod hypercube;
pub mod incidence;

pub use chart::{surface_spec, BoundaryLift, ChartJet, SurfaceChart};
pub use forms::{omega, phi_km_o, psi_m_o, psi_o, TangentPair};
pub use frame::{
    majorant, majorant_matrix, orthonormal_frame, r_quantity, same_component, OrientedFrame,
};
pub use incidence::{
    intersection_number, intersection_point, phi2, phi_r, validate_incidence, FrameConfig,
    IncidenceReport,
};
