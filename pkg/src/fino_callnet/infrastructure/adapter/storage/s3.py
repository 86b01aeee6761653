import logging

import boto3
from botocore.exceptions import ClientError
from mypy_boto3_s3.client import S3Client

from fino_callnet.interface.config.storage import S3StorageConfig
from fino_callnet.interface.port.storage import StoragePort

logger = logging.getLogger(__name__)


class S3Storage(StoragePort):
    def __init__(self, config: S3StorageConfig) -> None:
        self.bucket_name = config.bucket_name
        self.region = config.region
        self.prefix = self._normalize_prefix(config.prefix or "")
        self.s3_client: S3Client = boto3.client("s3", region_name=self.region)  # type: ignore[reportUnknownMemberType]

    def exists(self, path: str) -> bool:
        key = self._resolve_key(path)
        try:
            _ = self.s3_client.head_object(Bucket=self.bucket_name, Key=key)
            return True
        except ClientError as e:
            error_code = e.response.get("Error", {}).get("Code", "")
            if error_code in ("404", "NoSuchKey"):
                return False
            raise

    def save(self, path: str, file: bytes) -> None:
        key = self._resolve_key(path)
        try:
            response = self.s3_client.put_object(Bucket=self.bucket_name, Key=key, Body=file)
            if "ETag" not in response:
                raise IOError(f"Failed to save file to S3: {path}")
        except ClientError as e:
            raise IOError(f"Failed to save file to S3: {path}") from e
        logger.debug("saved %d bytes to s3://%s/%s", len(file), self.bucket_name, key)

    def load(self, path: str) -> bytes:
        key = self._resolve_key(path)
        try:
            response = self.s3_client.get_object(Bucket=self.bucket_name, Key=key)
        except ClientError as e:
            error_code = e.response.get("Error", {}).get("Code", "")
            if error_code in ("404", "NoSuchKey"):
                raise FileNotFoundError(f"Artifact not found: {self.describe(path)}") from e
            raise IOError(f"Failed to load file from S3: {path}") from e
        return response["Body"].read()

    def delete(self, path: str) -> None:
        key = self._resolve_key(path)
        try:
            _ = self.s3_client.delete_object(Bucket=self.bucket_name, Key=key)
        except ClientError as e:
            raise IOError(f"Failed to delete file from S3: {path}") from e

    def describe(self, path: str) -> str:
        return f"s3://{self.bucket_name}/{self._resolve_key(path)}"

    def _normalize_prefix(self, prefix: str) -> str:
        # 空白チェックは strip の前に行う
        if prefix != prefix.strip():
            raise ValueError(f"S3 prefix cannot have spaces: '{prefix}'")

        prefix = prefix.strip("/")

        if ".." in prefix.split("/"):
            raise ValueError(f"S3 prefix cannot contain '..': {prefix}")

        return prefix

    def _resolve_key(self, path: str) -> str:
        if path.startswith("/"):
            raise ValueError("Absolute path is not allowed")

        path_parts = path.split("/")
        if any(part == ".." for part in path_parts):
            raise ValueError("Path traversal detected")

        normalized_path = "/".join(part for part in path_parts if part)

        if self.prefix:
            return f"{self.prefix}/{normalized_path}"
        return normalized_path
