/// A maximal run of Chinese characters within a line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Miu {
    pub text: String,
    /// Byte offset of the run in its line.
    pub offset: usize,
}

/// CJK Unified Ideographs, U+4E00 to U+9FFF.
pub fn is_chinese(c: char) -> bool {
    ('\u{4e00}'..='\u{9fff}').contains(&c)
}

pub fn extract_mius(line: &str) -> Vec<Miu> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (is_chinese(c), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push(Miu {
                    text: line[s..i].to_string(),
                    offset: s,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Miu {
            text: line[s..].to_string(),
            offset: s,
        });
    }
    out
}
