//! Synthetic maildir corpora for tests.

#![allow(dead_code)]

use std::fs;
use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Letters-only word for `n` (base-26, at least two letters).
pub fn word(n: usize) -> String {
    let mut n = n + 26;
    let mut out = Vec::new();
    while n > 0 {
        out.push(b'a' + (n % 26) as u8);
        n /= 26;
    }
    out.reverse();
    String::from_utf8(out).unwrap()
}

const FILLER: [&str; 12] = [
    "the", "and", "for", "we", "will", "have", "meeting", "please", "thanks", "update", "today", "team",
];

/// Email text: header block ending in `X-FileName:`, then a body mixing
/// label-specific topic words, shared background words, filler and noise.
pub fn synth_email(rng: &mut StdRng, label: usize, id: usize) -> String {
    let mut body = Vec::new();
    let n_words = rng.random_range(20..80);
    for _ in 0..n_words {
        let pick = rng.random_range(0..100);
        let w = if pick < 40 {
            word(1000 * (label + 1) + rng.random_range(0..40))
        } else if pick < 70 {
            word(50_000 + rng.random_range(0..150))
        } else if pick < 90 {
            FILLER[rng.random_range(0..FILLER.len())].to_string()
        } else {
            format!("{}", rng.random_range(0..500))
        };
        body.push(w);
    }
    let mut lines = Vec::new();
    for chunk in body.chunks(9) {
        lines.push(chunk.join(" ") + ".");
    }
    format!(
        "Message-ID: <{id}.JavaMail.evans@thyme>\n\
         From: sender{id}@enron.com\n\
         To: desk@enron.com\n\
         Subject: {} {}\n\
         X-From: Sender\n\
         X-FileName: sender.nsf\n\
         \n\
         {}\n\
         -----Original Message-----\n",
        word(1000 * (label + 1) + rng.random_range(0..40)),
        word(50_000 + rng.random_range(0..150)),
        lines.join("\n")
    )
}

/// Writes `labels.len()` folders of `per_label` emails under
/// `root/user<k>/<label>/` and returns the label file text.
pub fn write_corpus(root: &Path, labels: &[&str], per_label: usize, seed: u64) -> String {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut label_file = String::new();
    for (l, name) in labels.iter().enumerate() {
        let dir = root.join(format!("user{l}")).join(name);
        fs::create_dir_all(&dir).unwrap();
        for i in 0..per_label {
            let text = synth_email(&mut rng, l, l * per_label + i);
            fs::write(dir.join(format!("{}.", i + 1)), text).unwrap();
        }
        label_file.push_str(&format!("{name},{l}\n"));
    }
    label_file
}
