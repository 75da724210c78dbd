//! XMI reader/writer and PlantUML rendering for [`UmlModel`](crate::UmlModel).

mod plantuml;
mod xmi;

pub use plantuml::write_plantuml;
pub use xmi::{read_xmi, write_xmi, XmiRead, PROFILE_NS};
