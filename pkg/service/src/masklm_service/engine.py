"""Masked-LM readout: one softmax at one mask position.

The wire protocol spells the mask as the literal substring "[MASK]"; the
engine translates it into the loaded tokenizer's own mask token. Inference
runs in eval mode under no_grad, so identical requests produce identical
distributions.
"""

from __future__ import annotations

import torch
from transformers import AutoModelForMaskedLM, AutoTokenizer

MASK_MARKER = "[MASK]"


class PromptError(ValueError):
    """The prompt does not contain exactly one mask position."""


class MaskFiller:
    def __init__(self, model_name: str, device: str = "cpu"):
        self.model_name = model_name
        self.device = device
        self.tokenizer = AutoTokenizer.from_pretrained(model_name)
        self.model = AutoModelForMaskedLM.from_pretrained(model_name).to(device).eval()
        self._id_to_token = {i: t for t, i in self.tokenizer.get_vocab().items()}

    @property
    def vocab_size(self) -> int:
        return len(self._id_to_token)

    def _mask_distribution(self, prompt: str) -> torch.Tensor:
        if prompt.count(MASK_MARKER) != 1:
            raise PromptError(
                f"prompt must contain exactly one {MASK_MARKER}, "
                f"found {prompt.count(MASK_MARKER)}"
            )
        text = prompt.replace(MASK_MARKER, self.tokenizer.mask_token)
        encoded = self.tokenizer(text, return_tensors="pt", truncation=True).to(self.device)
        positions = (encoded["input_ids"][0] == self.tokenizer.mask_token_id).nonzero()
        if positions.numel() != 1:
            raise PromptError("tokenization did not yield exactly one mask position")
        with torch.no_grad():
            logits = self.model(**encoded).logits
        return torch.softmax(logits[0, positions.item()], dim=-1)

    def top_fillers(self, prompt: str, top_n: int) -> list[tuple[str, float]]:
        probs = self._mask_distribution(prompt)
        k = min(top_n, probs.shape[-1])
        values, indices = torch.topk(probs, k)
        return [
            (self._id_to_token[i], float(v)) for v, i in zip(values.tolist(), indices.tolist())
        ]

    def token_probs(self, prompt: str, tokens: list[str]) -> list[tuple[str, float]]:
        """Probabilities of exactly the requested tokens, highest first.

        A token outside the vocabulary gets probability 0.0 rather than the
        [UNK] row's probability.
        """
        probs = self._mask_distribution(prompt)
        unk_id = self.tokenizer.unk_token_id
        out = []
        for token in tokens:
            token_id = self.tokenizer.convert_tokens_to_ids(token)
            if token_id is None or (token_id == unk_id and token != self.tokenizer.unk_token):
                out.append((token, 0.0))
            else:
                out.append((token, float(probs[token_id])))
        out.sort(key=lambda pair: -pair[1])
        return out
