/// Lowercase, drop punctuation (an apostrophe survives only between two
/// alphanumeric characters), split on whitespace.
pub fn tokenize(raw: &str) -> Vec<String> {
    raw.split_whitespace()
        .filter_map(|word| {
            let chars: Vec<char> = word.chars().collect();
            let mut out = String::with_capacity(word.len());
            for (i, &ch) in chars.iter().enumerate() {
                if ch.is_alphanumeric() {
                    out.extend(ch.to_lowercase().filter(|c| c.is_alphanumeric()));
                } else if ch == '\'' || ch == '\u{2019}' {
                    let prev = i > 0 && chars[i - 1].is_alphanumeric();
                    let next = chars.get(i + 1).is_some_and(|c| c.is_alphanumeric());
                    if prev && next {
                        out.push('\'');
                    }
                }
            }
            (!out.is_empty()).then_some(out)
        })
        .collect()
}

pub fn detokenize<S: AsRef<str>>(tokens: &[S]) -> String {
    tokens
        .iter()
        .map(|t| t.as_ref())
        .collect::<Vec<_>>()
        .join(" ")
}
