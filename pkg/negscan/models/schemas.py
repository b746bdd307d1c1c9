"""
Pydantic schemas for validating external inputs.
"""

from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class InSet(BaseModel):
    """The `{"IN": [...]}` form of a token attribute."""
    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    values: List[str] = Field(..., alias='IN', min_length=1, description="Accepted values")


class TokenSpecSchema(BaseModel):
    """One token of a pattern, mirroring `[{"TEXT": "não"}, {"POS": {"IN": ["VERB", "AUX"]}}]`."""
    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    text: Optional[Union[str, InSet]] = Field(None, alias='TEXT', description="Exact word(s), compared lowercased")
    pos: Optional[InSet] = Field(None, alias='POS', description="Accepted UPOS tags")

    @field_validator('text')
    def text_must_not_be_blank(cls, v):
        if isinstance(v, str) and not v.strip():
            raise ValueError('TEXT cannot be empty')
        return v

    @model_validator(mode='after')
    def needs_an_attribute(self):
        if self.text is None and self.pos is None:
            raise ValueError('a token spec needs TEXT, POS or both')
        return self

    def text_values(self) -> Optional[List[str]]:
        if self.text is None:
            return None
        if isinstance(self.text, str):
            return [self.text]
        return list(self.text.values)

    def pos_values(self) -> Optional[List[str]]:
        return None if self.pos is None else [tag.upper() for tag in self.pos.values]


class PatternSchema(BaseModel):
    """One entry of a pattern file."""
    model_config = ConfigDict(extra='forbid')

    id: str = Field(..., min_length=1, description="Pattern identifier, e.g. NEG1")
    priority: Optional[int] = Field(None, description="Overlap priority; lower wins")
    max_gap: int = Field(0, ge=0, description="Wildcard tokens allowed between consecutive specs")
    specs: List[TokenSpecSchema] = Field(..., description="Ordered token specs")

    @field_validator('id')
    def id_must_not_be_blank(cls, v):
        if not v.strip():
            raise ValueError('id cannot be blank')
        return v.strip()
