//! Instance generators, verification campaigns and reports.

pub mod campaign;
pub mod corpus;
pub mod report;

pub use campaign::{verify_campaign, CampaignOptions};
pub use corpus::{
    cube, generate_corpus, load_instance, random_dag, sidecar_path, standard_corpus, CorpusFlags,
    CorpusInstance, CorpusSpec, Generator, InstanceBody, Sizes,
};
pub use report::{emit_report, parse_json_report, BoundReport, Check, ReportFormat};
