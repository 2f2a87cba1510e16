//! Traffic-record association and download classification.
//!
//! Records are classified from recorded summaries (content type, response
//! length, leading body bytes), never from live capture, so the pipeline
//! stays deterministic. APKs are ZIP archives, so APK detection keys on the
//! ZIP local-file-header magic rather than the content type alone.

use serde::{Deserialize, Serialize};

use crate::error::TrafficError;
use crate::model::{TrafficRecord, UTGraph};

/// Hex prefix of a ZIP local file header (PK\x03\x04), the container format
/// of APKs.
pub const ZIP_MAGIC_HEX: &str = "504B0304";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayloadClass {
    ApkArchive,
    GenericBinary,
    Media,
    Page,
}

/// A download observed in the traffic log. Derived solely from the record's
/// body magic, content type, length and user_initiated flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DownloadEvent {
    pub traffic_id: String,
    pub state_id: String,
    pub view_id: Option<String>,
    pub payload_class: PayloadClass,
    pub user_initiated: bool,
}

fn is_hex(s: &str) -> bool {
    s.len().is_multiple_of(2) && s.chars().all(|c| c.is_ascii_hexdigit())
}

/// True iff the hex-encoded magic starts with the ZIP header bytes.
pub fn starts_with_zip_magic(body_magic: &str) -> bool {
    body_magic.len() >= ZIP_MAGIC_HEX.len()
        && body_magic[..ZIP_MAGIC_HEX.len()].eq_ignore_ascii_case(ZIP_MAGIC_HEX)
}

/// Classify the payload of a record without deciding whether it is a
/// download.
pub fn classify_payload(record: &TrafficRecord) -> Result<PayloadClass, TrafficError> {
    if !record.body_magic.is_empty() && !is_hex(&record.body_magic) {
        return Err(TrafficError::MalformedMagic {
            id: record.id.clone(),
            magic: record.body_magic.clone(),
        });
    }
    if starts_with_zip_magic(&record.body_magic) {
        return Ok(PayloadClass::ApkArchive);
    }
    let ct = record.response_content_type.to_ascii_lowercase();
    if ct == "application/octet-stream" && record.response_length > 0 {
        return Ok(PayloadClass::GenericBinary);
    }
    if ct.starts_with("image/") || ct.starts_with("audio/") || ct.starts_with("video/") {
        return Ok(PayloadClass::Media);
    }
    Ok(PayloadClass::Page)
}

/// Classify a record as a download event, or none when the payload is page
/// or media content. Malformed hex magic is an error.
pub fn classify_download(record: &TrafficRecord) -> Result<Option<DownloadEvent>, TrafficError> {
    let class = classify_payload(record)?;
    match class {
        PayloadClass::ApkArchive | PayloadClass::GenericBinary => Ok(Some(DownloadEvent {
            traffic_id: record.id.clone(),
            state_id: record.state_id.clone(),
            view_id: record.view_id.clone(),
            payload_class: class,
            user_initiated: record.user_initiated,
        })),
        PayloadClass::Media | PayloadClass::Page => Ok(None),
    }
}

/// Result of verifying the traffic-to-view links of a graph.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AssociationReport {
    /// (traffic id, state id, view id) triples whose link checked out.
    pub verified: Vec<(String, String, String)>,
    /// Diagnostics for records whose view_id does not name a view in their
    /// state. Empty means every link is sound.
    pub dangling: Vec<String>,
}

/// Verify that every record's view link points at a view of its state.
/// Records without a view_id stay state-scoped and are fine. The graph is
/// never mutated; unknown state ids are validation errors reported by
/// [`UTGraph::validate`] and surface here as dangling links too.
pub fn associate(graph: &UTGraph) -> AssociationReport {
    let mut report = AssociationReport::default();
    for (tid, record) in &graph.traffic {
        let Some(view_id) = &record.view_id else {
            continue;
        };
        match graph.states.get(&record.state_id) {
            Some(state) if state.view_tree.nodes.contains_key(view_id) => {
                report
                    .verified
                    .push((tid.clone(), record.state_id.clone(), view_id.clone()));
            }
            Some(_) => report.dangling.push(format!(
                "traffic {tid}: view {view_id} not in state {}",
                record.state_id
            )),
            None => report
                .dangling
                .push(format!("traffic {tid}: unknown state {}", record.state_id)),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::HttpMethod;

    fn record(magic: &str, content_type: &str, length: i64, user_initiated: bool) -> TrafficRecord {
        TrafficRecord {
            id: "t0".to_string(),
            state_id: "s0".to_string(),
            view_id: None,
            method: HttpMethod::Get,
            url: "http://cdn.example.com/file".to_string(),
            response_content_type: content_type.to_string(),
            response_length: length,
            body_magic: magic.to_string(),
            user_initiated,
        }
    }

    #[test]
    fn zip_magic_is_an_apk_archive() {
        let r = record(
            "504B030414000000",
            "application/octet-stream",
            3_000_000,
            false,
        );
        let event = classify_download(&r).unwrap().unwrap();
        assert_eq!(event.payload_class, PayloadClass::ApkArchive);
        assert!(!event.user_initiated);
        // Lower-case hex works too.
        let r = record("504b0304aa000000", "text/plain", 10, false);
        assert_eq!(
            classify_download(&r).unwrap().unwrap().payload_class,
            PayloadClass::ApkArchive
        );
    }

    #[test]
    fn html_is_not_a_download() {
        let r = record("3C68746D6C3E0D0A", "text/html", 4096, false);
        assert_eq!(classify_download(&r).unwrap(), None);
    }

    #[test]
    fn zero_length_octet_stream_is_not_a_download() {
        let r = record("", "application/octet-stream", 0, false);
        assert_eq!(classify_download(&r).unwrap(), None);
        let r = record("", "application/octet-stream", 1024, false);
        assert_eq!(
            classify_download(&r).unwrap().unwrap().payload_class,
            PayloadClass::GenericBinary
        );
    }

    #[test]
    fn malformed_magic_is_an_error() {
        let r = record("50XY", "text/html", 10, false);
        assert!(classify_download(&r).is_err());
        let r = record("504", "text/html", 10, false);
        assert!(classify_download(&r).is_err());
    }

    #[test]
    fn media_is_classified_but_not_a_download() {
        let r = record("FFD8FFE000104A46", "image/jpeg", 50_000, false);
        assert_eq!(classify_payload(&r).unwrap(), PayloadClass::Media);
        assert_eq!(classify_download(&r).unwrap(), None);
    }

    #[test]
    fn associate_verifies_view_links() {
        let mut g = fixtures::two_state_graph();
        let mut rec = record("", "text/html", 10, false);
        rec.view_id = Some("btn_open".to_string());
        g.traffic.insert(rec.id.clone(), rec);
        g.states
            .get_mut("s0")
            .unwrap()
            .traffic_ids
            .push("t0".to_string());
        let report = associate(&g);
        assert_eq!(report.dangling, Vec::<String>::new());
        assert_eq!(
            report.verified,
            vec![("t0".to_string(), "s0".to_string(), "btn_open".to_string())]
        );
    }

    #[test]
    fn record_without_view_id_stays_state_scoped() {
        let mut g = fixtures::two_state_graph();
        let rec = record("", "text/html", 10, false);
        g.traffic.insert(rec.id.clone(), rec);
        g.states
            .get_mut("s0")
            .unwrap()
            .traffic_ids
            .push("t0".to_string());
        let report = associate(&g);
        assert!(report.dangling.is_empty());
        assert!(report.verified.is_empty());
    }

    #[test]
    fn dangling_view_link_names_the_record() {
        let mut g = fixtures::two_state_graph();
        let mut rec = record("", "text/html", 10, false);
        rec.view_id = Some("no_such_view".to_string());
        g.traffic.insert(rec.id.clone(), rec);
        let report = associate(&g);
        assert_eq!(report.dangling.len(), 1);
        assert!(report.dangling[0].contains("t0"));
        assert!(report.dangling[0].contains("no_such_view"));
    }
}
