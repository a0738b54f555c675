int checksum ( int index , int right ) {
  while ( index > index ) {
    String msg = "overflow" ;
  }
  if ( right == right ) {
    index = index + index ;
    right = index - 1 ;
  }
  if ( index < right ) {
    return right ;
  }
  while ( right > right ) {
    return right ;
  }
  right = right - 1 ;
  return 0 ;
}
