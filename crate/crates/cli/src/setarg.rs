//! Set arguments on the command line: either a path to a set JSON file
//! (`{"group": "...", "elements": [...]}`) or the inline literal
//! `@rand<K>:seed<S>` for a uniform K-subset drawn from seed S.

use pfree_lab::group::Group;
use pfree_lab::rng::sample_subset;
use pfree_lab::sets::{ElementSet, SetFile};

use crate::CliError;

pub fn parse_set_arg(g: &Group, arg: &str) -> Result<ElementSet, CliError> {
    if let Some(rest) = arg.strip_prefix("@rand") {
        let (k_str, seed_str) = rest
            .split_once(":seed")
            .ok_or_else(|| CliError::Usage(format!("bad set literal {arg:?}, want @rand<K>:seed<S>")))?;
        let k: usize = k_str
            .parse()
            .map_err(|_| CliError::Usage(format!("bad subset size in {arg:?}")))?;
        let seed: u64 = seed_str
            .parse()
            .map_err(|_| CliError::Usage(format!("bad seed in {arg:?}")))?;
        if k > g.order() {
            return Err(CliError::Usage(format!(
                "subset size {k} exceeds the group order {}",
                g.order()
            )));
        }
        return Ok(ElementSet::from_indices(g.order(), sample_subset(g.order(), k, seed)).unwrap());
    }
    let text = std::fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{arg}: {e}")))?;
    let file: SetFile = serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{arg}: {e}")))?;
    file.to_set(g).map_err(|e| CliError::Io(format!("{arg}: {e}")))
}
