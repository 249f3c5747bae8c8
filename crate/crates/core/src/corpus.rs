//! Folder discovery and per-label email selection.
//!
//! The corpus is a directory tree whose leaf folder names act as labels (the
//! Enron maildir layout: `maildir/<user>/<folder>/<n>.`). For every configured
//! label the first folder in depth-first, name-sorted traversal that carries
//! the label as its leaf name and directly holds enough files is chosen, and
//! the first files of that folder become the selected emails.

use std::cmp::Ordering;
use std::fs;
use std::path::{Path, PathBuf};

use walkdir::WalkDir;

use crate::error::{Error, Result};

/// Default number of emails taken from each labelled folder.
pub const DEFAULT_EMAILS_PER_LABEL: usize = 300;

/// Label names in label-number order.
pub const DEFAULT_LABELS: [&str; 8] = [
    "projects",
    "logistics",
    "resumes",
    "universities",
    "online_trading",
    "meetings",
    "management",
    "ces",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSpec {
    pub name: String,
    pub number: usize,
    pub emails_per_label: usize,
}

/// A validated list of labels: distinct names, numbers contiguous from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    labels: Vec<LabelSpec>,
}

impl Default for LabelSet {
    fn default() -> Self {
        LabelSet {
            labels: DEFAULT_LABELS
                .iter()
                .enumerate()
                .map(|(number, name)| LabelSpec {
                    name: name.to_string(),
                    number,
                    emails_per_label: DEFAULT_EMAILS_PER_LABEL,
                })
                .collect(),
        }
    }
}

impl LabelSet {
    pub fn new(labels: Vec<LabelSpec>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::LabelSpec("no labels given".into()));
        }
        let mut numbers: Vec<usize> = labels.iter().map(|l| l.number).collect();
        numbers.sort_unstable();
        if numbers.iter().enumerate().any(|(i, &n)| i != n) {
            return Err(Error::LabelSpec(format!(
                "label numbers must be distinct and contiguous from 0, got {numbers:?}"
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if a.name.is_empty() || a.name != a.name.to_lowercase() {
                return Err(Error::LabelSpec(format!(
                    "label name {:?} must be non-empty lowercase text",
                    a.name
                )));
            }
            if labels[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::LabelSpec(format!("duplicate label {:?}", a.name)));
            }
        }
        Ok(LabelSet { labels })
    }

    /// Parses `label_name,label_number` lines. Blank lines and `#` comments
    /// are skipped.
    pub fn parse(text: &str, emails_per_label: usize) -> Result<Self> {
        let mut labels = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, number) = line.split_once(',').ok_or_else(|| {
                Error::LabelSpec(format!("line {}: expected `name,number`", i + 1))
            })?;
            let number = number.trim().parse::<usize>().map_err(|_| {
                Error::LabelSpec(format!("line {}: bad label number {:?}", i + 1, number.trim()))
            })?;
            labels.push(LabelSpec {
                name: name.trim().to_string(),
                number,
                emails_per_label,
            });
        }
        Self::new(labels)
    }

    pub fn with_emails_per_label(mut self, emails_per_label: usize) -> Self {
        for l in &mut self.labels {
            l.emails_per_label = emails_per_label;
        }
        self
    }

    pub fn labels(&self) -> &[LabelSpec] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn number_of(&self, label_name: &str) -> Result<usize> {
        self.labels
            .iter()
            .find(|l| l.name == label_name)
            .map(|l| l.number)
            .ok_or_else(|| Error::UnknownLabel(label_name.to_string()))
    }

    /// Label names indexed by label number.
    pub fn names_by_number(&self) -> Vec<String> {
        let mut names = vec![String::new(); self.labels.len()];
        for l in &self.labels {
            names[l.number] = l.name.clone();
        }
        names
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEmail {
    /// Position in pre-scramble selection order.
    pub email_id: usize,
    pub label_number: usize,
    pub source_path: PathBuf,
    pub lines: Vec<String>,
}

impl RawEmail {
    pub fn from_bytes(email_id: usize, label_number: usize, source_path: PathBuf, bytes: &[u8]) -> Self {
        let text = String::from_utf8_lossy(bytes);
        RawEmail {
            email_id,
            label_number,
            source_path,
            lines: text.lines().map(str::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Folder {
    pub leaf_name: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, Default)]
pub struct FolderWalk {
    pub folders: Vec<Folder>,
    /// Subtrees skipped because they could not be read.
    pub warnings: Vec<String>,
}

/// Depth-first, pre-order listing of every directory below `root` (the root
/// itself excluded). Siblings are visited in byte-wise name order.
pub fn discover_folders(root: &Path) -> Result<FolderWalk> {
    fs::read_dir(root).map_err(|source| Error::CorpusRoot {
        path: root.to_path_buf(),
        source,
    })?;

    let mut walk = FolderWalk::default();
    let walker = WalkDir::new(root)
        .min_depth(1)
        .follow_links(false)
        .sort_by(|a, b| a.file_name().cmp(b.file_name()));
    for entry in walker {
        match entry {
            Ok(entry) if entry.file_type().is_dir() => walk.folders.push(Folder {
                leaf_name: entry.file_name().to_string_lossy().into_owned(),
                path: entry.into_path(),
            }),
            Ok(_) => {}
            Err(err) => {
                let at = err
                    .path()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default();
                walk.warnings.push(format!("skipping unreadable {at}: {err}"));
            }
        }
    }
    Ok(walk)
}

/// Regular files directly inside `dir`, in email order.
pub fn list_email_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let ty = entry.file_type().map_err(|e| Error::io(entry.path(), e))?;
        if ty.is_file() {
            files.push(entry.path());
        }
    }
    sort_email_files(&mut files);
    Ok(files)
}

fn numeric_stem(path: &Path) -> Option<u64> {
    let name = path.file_name()?.to_str()?;
    let stem = name.strip_suffix('.').unwrap_or(name);
    if stem.is_empty() || !stem.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    stem.parse().ok()
}

/// Numeric order when every name is an integer (optionally with a trailing
/// dot, as in Enron's `1.`, `2.`), byte-wise name order otherwise.
pub fn sort_email_files(files: &mut [PathBuf]) {
    let by_name = |a: &PathBuf, b: &PathBuf| a.file_name().cmp(&b.file_name());
    if files.iter().all(|f| numeric_stem(f).is_some()) {
        files.sort_by(|a, b| match numeric_stem(a).cmp(&numeric_stem(b)) {
            Ordering::Equal => by_name(a, b),
            other => other,
        });
    } else {
        files.sort_by(by_name);
    }
}

/// Selected emails plus the folder chosen for each label.
#[derive(Debug, Clone, Default)]
pub struct Selection {
    pub emails: Vec<RawEmail>,
    pub chosen_folders: Vec<(String, PathBuf)>,
    pub warnings: Vec<String>,
}

pub fn select_emails(root: &Path, labels: &LabelSet) -> Result<Selection> {
    let walk = discover_folders(root)?;
    let mut selection = Selection {
        warnings: walk.warnings,
        ..Selection::default()
    };

    for spec in labels.labels() {
        let mut chosen = None;
        for folder in walk.folders.iter().filter(|f| f.leaf_name == spec.name) {
            let files = match list_email_files(&folder.path) {
                Ok(files) => files,
                Err(err) => {
                    selection.warnings.push(err.to_string());
                    continue;
                }
            };
            if files.len() >= spec.emails_per_label {
                chosen = Some((folder, files));
                break;
            }
        }
        let (folder, files) = chosen.ok_or_else(|| Error::LabelNotFound {
            label: spec.name.clone(),
            required: spec.emails_per_label,
        })?;
        selection
            .chosen_folders
            .push((spec.name.clone(), folder.path.clone()));

        for path in files.into_iter().take(spec.emails_per_label) {
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            let id = selection.emails.len();
            selection
                .emails
                .push(RawEmail::from_bytes(id, spec.number, path, &bytes));
        }
    }
    Ok(selection)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn touch(dir: &Path, names: &[String]) {
        fs::create_dir_all(dir).unwrap();
        for n in names {
            fs::write(dir.join(n), format!("body of {n}\n")).unwrap();
        }
    }

    fn numbered(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{i}.")).collect()
    }

    #[test]
    fn default_labels_follow_table_order() {
        let labels = LabelSet::default();
        assert_eq!(labels.number_of("projects").unwrap(), 0);
        assert_eq!(labels.number_of("online_trading").unwrap(), 4);
        assert_eq!(labels.number_of("ces").unwrap(), 7);
        assert!(matches!(labels.number_of("sports"), Err(Error::UnknownLabel(_))));
        assert_eq!(labels.labels().iter().map(|l| l.emails_per_label).sum::<usize>(), 2400);
    }

    #[test]
    fn label_file_parsing() {
        let set = LabelSet::parse("# demo\nalpha,1\nbeta , 0 # trailing\n\n", 5).unwrap();
        assert_eq!(set.number_of("beta").unwrap(), 0);
        assert_eq!(set.names_by_number(), vec!["beta", "alpha"]);
        assert!(LabelSet::parse("a,0\nb,2\n", 1).is_err());
        assert!(LabelSet::parse("a,0\na,1\n", 1).is_err());
        assert!(LabelSet::parse("a 0\n", 1).is_err());
        assert!(LabelSet::parse("", 1).is_err());
    }

    #[test]
    fn empty_root_has_no_folders() {
        let tmp = tempfile::tempdir().unwrap();
        assert!(discover_folders(tmp.path()).unwrap().folders.is_empty());
    }

    #[test]
    fn missing_root_is_fatal() {
        let tmp = tempfile::tempdir().unwrap();
        let err = discover_folders(&tmp.path().join("nope")).unwrap_err();
        assert!(err.is_usage());
    }

    #[test]
    fn traversal_is_depth_first_and_sorted() {
        let tmp = tempfile::tempdir().unwrap();
        for d in ["b/x", "a/x"] {
            fs::create_dir_all(tmp.path().join(d)).unwrap();
        }
        let walk = discover_folders(tmp.path()).unwrap();
        let got: Vec<(String, PathBuf)> = walk
            .folders
            .into_iter()
            .map(|f| (f.leaf_name, f.path.strip_prefix(tmp.path()).unwrap().to_path_buf()))
            .collect();
        let want: Vec<(String, PathBuf)> = [("a", "a"), ("x", "a/x"), ("b", "b"), ("x", "b/x")]
            .iter()
            .map(|(n, p)| (n.to_string(), PathBuf::from(p)))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn numeric_file_order() {
        let mut files: Vec<PathBuf> = ["10.", "2.", "1."].iter().map(PathBuf::from).collect();
        sort_email_files(&mut files);
        assert_eq!(files, vec![PathBuf::from("1."), PathBuf::from("2."), PathBuf::from("10.")]);

        let mut mixed: Vec<PathBuf> = ["10.", "b", "2."].iter().map(PathBuf::from).collect();
        sort_email_files(&mut mixed);
        assert_eq!(mixed, vec![PathBuf::from("10."), PathBuf::from("2."), PathBuf::from("b")]);
    }

    #[test]
    fn duplicate_leaf_name_takes_first_qualifying_folder() {
        let tmp = tempfile::tempdir().unwrap();
        touch(&tmp.path().join("allen-p/projects"), &numbered(2));
        touch(&tmp.path().join("zipper-a/projects"), &numbered(300));
        let labels = LabelSet::new(vec![LabelSpec {
            name: "projects".into(),
            number: 0,
            emails_per_label: 300,
        }])
        .unwrap();
        let sel = select_emails(tmp.path(), &labels).unwrap();
        assert_eq!(sel.chosen_folders[0].1, tmp.path().join("zipper-a/projects"));
        assert_eq!(sel.emails.len(), 300);
        assert_eq!(sel.emails[0].source_path.file_name().unwrap(), "1.");
        assert_eq!(sel.emails[299].source_path.file_name().unwrap(), "300.");
    }

    #[test]
    fn zero_budget_selects_nothing() {
        let tmp = tempfile::tempdir().unwrap();
        touch(&tmp.path().join("u/projects"), &numbered(1));
        touch(&tmp.path().join("u/ces"), &numbered(1));
        let labels = LabelSet::parse("projects,0\nces,1\n", 0).unwrap();
        let sel = select_emails(tmp.path(), &labels).unwrap();
        assert!(sel.emails.is_empty());
    }

    #[test]
    fn selection_is_contiguous_per_label() {
        let tmp = tempfile::tempdir().unwrap();
        touch(&tmp.path().join("u/ces"), &numbered(4));
        touch(&tmp.path().join("u/projects"), &numbered(3));
        touch(&tmp.path().join("u/projects/nested"), &numbered(9));
        let labels = LabelSet::parse("projects,0\nces,1\n", 3).unwrap();
        let sel = select_emails(tmp.path(), &labels).unwrap();
        let got: Vec<(usize, usize)> = sel.emails.iter().map(|e| (e.email_id, e.label_number)).collect();
        assert_eq!(got, vec![(0, 0), (1, 0), (2, 0), (3, 1), (4, 1), (5, 1)]);
        for e in &sel.emails {
            let parent = e.source_path.parent().unwrap().file_name().unwrap();
            assert_eq!(parent.to_str().unwrap(), ["projects", "ces"][e.label_number]);
        }
        assert_eq!(sel.emails[0].lines, vec!["body of 1."]);
    }

    #[test]
    fn nested_files_do_not_count_toward_threshold() {
        let tmp = tempfile::tempdir().unwrap();
        touch(&tmp.path().join("u/projects"), &numbered(1));
        touch(&tmp.path().join("u/projects/sub"), &numbered(5));
        let labels = LabelSet::parse("projects,0\n", 3).unwrap();
        let err = select_emails(tmp.path(), &labels).unwrap_err();
        assert!(err.to_string().contains("projects"));
    }

    #[test]
    fn invalid_utf8_is_replaced() {
        let email = RawEmail::from_bytes(0, 0, PathBuf::from("x"), b"ok\xff line\r\nnext");
        assert_eq!(email.lines, vec!["ok\u{fffd} line", "next"]);
    }
}
