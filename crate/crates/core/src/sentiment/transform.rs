/// Hook for rewriting post text before cleaning, e.g. machine translation.
pub trait TextTransform: Send + Sync {
    fn transform(&self, text: &str) -> String;
}

/// Leaves text untouched.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl TextTransform for Identity {
    fn transform(&self, text: &str) -> String {
        text.to_string()
    }
}

impl<F> TextTransform for F
where
    F: Fn(&str) -> String + Send + Sync,
{
    fn transform(&self, text: &str) -> String {
        self(text)
    }
}
