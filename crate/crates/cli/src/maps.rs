//! Maps files: one block per map, separated by blank lines, each line
//! `src -> dst` with vertex labels of the input digraph. `#` starts a comment.

use magpath::Digraph;

use crate::CliError;

/// Parses every block into a full assignment on vertex ids. Whether each
/// assignment is a digraph map is left to the caller.
pub fn parse_maps(text: &str, g: &Digraph) -> Result<Vec<Vec<usize>>, CliError> {
    let mut blocks = Vec::new();
    let mut current: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut start = None;

    let finish = |current: &mut Vec<Option<usize>>, start: Option<usize>| -> Result<Option<Vec<usize>>, CliError> {
        let Some(start) = start else { return Ok(None) };
        let mut out = Vec::with_capacity(current.len());
        for (v, image) in current.iter().enumerate() {
            match image {
                Some(w) => out.push(*w),
                None => {
                    return Err(CliError::Usage(format!(
                        "maps file: the map starting on line {start} does not assign vertex `{}`",
                        g.name(v)
                    )))
                }
            }
        }
        current.iter_mut().for_each(|x| *x = None);
        Ok(Some(out))
    };

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            if let Some(m) = finish(&mut current, start.take())? {
                blocks.push(m);
            }
            continue;
        }
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((src, dst)) = content.split_once("->") else {
            return Err(CliError::Usage(format!("maps file line {line}: expected `src -> dst`")));
        };
        let lookup = |label: &str| {
            g.index_of(label.trim())
                .ok_or_else(|| CliError::Usage(format!("maps file line {line}: unknown vertex `{}`", label.trim())))
        };
        let (s, d) = (lookup(src)?, lookup(dst)?);
        if current[s].is_some() {
            return Err(CliError::Usage(format!(
                "maps file line {line}: vertex `{}` is assigned twice",
                g.name(s)
            )));
        }
        current[s] = Some(d);
        start.get_or_insert(line);
    }
    if let Some(m) = finish(&mut current, start)? {
        blocks.push(m);
    }
    if blocks.is_empty() {
        return Err(CliError::Usage("maps file contains no maps".into()));
    }
    Ok(blocks)
}
